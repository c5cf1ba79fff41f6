import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from synthlattice.dynamics import SourceTerm, evolve
from synthlattice.model import ExcitationSpec
from synthlattice.oracle import (
    FockTrajectory,
    build_fock_hamiltonian,
    compare_trajectories,
    evolve_fock,
    fock_basis,
    fock_diagonal,
    occupations_to_tuple,
    symmetric_sector_matrix,
)
from synthlattice.synth import build_synthetic_operator, onsite_potential

from conftest import chain


def test_basis_size_and_order():
    b = fock_basis(4, 3)
    assert len(b) == math.comb(6, 3)
    assert np.all(b.sum(axis=1) == 3)
    assert [tuple(r) for r in b] == sorted(tuple(r) for r in b)


def test_two_site_algebra():
    spec = chain(g=0.8, U=1.7, R=0, cells=(0, 1))
    H = build_fock_hamiltonian(spec, 2)
    m = H.matrix.toarray()
    i20, i11 = H.index[(2, 0)], H.index[(1, 1)]
    assert m[i20, i20] == pytest.approx(1.7)
    assert m[i11, i11] == 0.0
    assert m[i20, i11] == pytest.approx(math.sqrt(2) * 0.8)


def test_single_site_three_bosons():
    spec = chain(U=2.0, R=0, cells=(0, 0))
    H = build_fock_hamiltonian(spec, 3)
    assert H.matrix.toarray()[0, 0] == pytest.approx(6.0)
    assert onsite_potential(spec, (0, 0, 0)) == 6.0


def test_dimension_cap():
    with pytest.raises(ValueError):
        build_fock_hamiltonian(chain(cells=(0, 49)), 3, cap=1000)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("K", [1, 3, 6])
def test_diagonal_matches_onsite_potential(n, K):
    for R in (0, 1, 2):
        spec = chain("alternating", U=1.3, R=R, cells=(0, 2), n_sites=K)
        for occ in fock_basis(K, n).tolist():
            tup = occupations_to_tuple(occ, spec.site_min)
            assert fock_diagonal(spec, occ) == pytest.approx(onsite_potential(spec, tup))


@given(
    g1=st.floats(0.2, 3),
    g2=st.floats(0.2, 3),
    U=st.floats(0, 5),
    R=st.integers(0, 2),
    periodic=st.booleans(),
)
def test_spectrum_equivalence_two_bosons(g1, g2, U, R, periodic):
    spec = chain("alternating", g1=g1, g2=g2, U=U, R=R, cells=(0, 3),
                 boundary="periodic" if periodic else "open")
    op = build_synthetic_operator(spec, 2)
    a = np.linalg.eigvalsh(symmetric_sector_matrix(op))
    b = np.linalg.eigvalsh(build_fock_hamiltonian(spec, 2).matrix.toarray())
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_spectrum_equivalence_three_bosons():
    spec = chain("alternating", g1=0.7, g2=2.2, U=4.0, R=2, cells=(0, 3), n_sites=7)
    op = build_synthetic_operator(spec, 3)
    a = np.linalg.eigvalsh(symmetric_sector_matrix(op))
    b = np.linalg.eigvalsh(build_fock_hamiltonian(spec, 3).matrix.toarray())
    np.testing.assert_allclose(a, b, atol=1e-9)


def _both(spec, n, sites, t_end=30.0, delta_e=0.5):
    exc = ExcitationSpec.at_sites(sites, delta_e=delta_e)
    op = build_synthetic_operator(spec, n)
    syn = evolve(op, SourceTerm(exc), t_end, normalize=False, keep_fields=True)
    fock = evolve_fock(build_fock_hamiltonian(spec, n), exc, t_end)
    return syn, fock


def test_single_boson_identity():
    spec = chain("alternating", g1=1.0, g2=2.0, cells=(0, 3))
    syn, fock = _both(spec, 1, [3])
    # basis is lexicographic in occupations, so site k sits at row K-1-k
    np.testing.assert_allclose(syn.fields, fock.amplitudes[:, ::-1], atol=1e-14)


def test_zero_source_fock():
    spec = chain(cells=(0, 3))
    H = build_fock_hamiltonian(spec, 2)
    tr = evolve_fock(H, ExcitationSpec.at_sites([0, 1], eta0=0.0), 30.0)
    assert np.all(tr.amplitudes == 0)


def test_compare_identical_is_zero():
    spec = chain(cells=(0, 3))
    H = build_fock_hamiltonian(spec, 2)
    tr = evolve_fock(H, ExcitationSpec.at_sites([0, 1]), 30.0)
    fields = np.zeros((len(tr.times), 16), dtype=complex)
    for j, occ in enumerate(H.basis.tolist()):
        tup = occupations_to_tuple(occ)
        w = math.sqrt(math.factorial(2) / np.prod([math.factorial(c) for c in occ]))
        for p in set(itertools.permutations(tup)):
            fields[:, np.ravel_multi_index(p, (4, 4))] = tr.amplitudes[:, j] / w
    assert compare_trajectories(fields, tr.times, 2, tr) == pytest.approx(0.0, abs=1e-15)


def test_trajectory_uniform_two_bosons():
    spec = chain(g=1.0, cells=(0, 9))
    syn, fock = _both(spec, 2, [2, 7])
    assert compare_trajectories(syn.fields, syn.times, 2, fock) < 1e-8


def test_trajectory_three_bosons():
    spec = chain(g=1.0, U=4.0, R=2, cells=(0, 6))
    syn, fock = _both(spec, 3, [1, 1, 5])
    assert compare_trajectories(syn.fields, syn.times, 3, fock) < 1e-7


def test_boson_numbers_agree():
    spec = chain("alternating", g1=1.0, g2=3.0, U=2.0, R=1, cells=(0, 3))
    syn, fock = _both(spec, 2, [0, 5])
    np.testing.assert_allclose(syn.boson_numbers, fock.boson_numbers(), atol=1e-10)


def test_source_free_conservation(rng):
    spec = chain("alternating", g1=1.0, g2=2.5, U=3.0, R=1, cells=(0, 3))
    H = build_fock_hamiltonian(spec, 3)
    u0 = rng.normal(size=H.dim) + 1j * rng.normal(size=H.dim)
    u0 /= np.linalg.norm(u0)
    tr = evolve_fock(H, u0, 10.0, dt=0.002, sample_every=0.5)
    norms = np.linalg.norm(tr.amplitudes, axis=1)
    np.testing.assert_allclose(norms, 1.0, atol=1e-8)
    np.testing.assert_allclose(tr.boson_numbers().sum(axis=1), 3.0, atol=1e-7)


def test_initial_state_shape_checked():
    H = build_fock_hamiltonian(chain(cells=(0, 2)), 2)
    with pytest.raises(ValueError):
        evolve_fock(H, np.zeros(3), 1.0)


def test_time_grids_must_match():
    tr = FockTrajectory(np.arange(3.0), np.zeros((3, 3)), fock_basis(2, 2), 0, 0.0)
    with pytest.raises(ValueError):
        compare_trajectories(np.zeros((2, 4)), np.arange(2.0), 2, tr)
