"""Brute-force bosonic Fock-space reference.

Everything here works in second quantization on occupation vectors and never
touches the synthetic grid, so it can cross-check the mapping: spectra,
driven trajectories and the amplitude conversion ``u = sqrt(N!/prod ξ!) v``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.special import comb

from .dynamics import _check_step, rk4_drive, source_envelope
from .model import Boundary, ExcitationSpec, LatticeSpec, cell_distance
from .synth import SyntheticOperator, canonical_tuples

__all__ = [
    "DEFAULT_CAP",
    "FockHamiltonian",
    "FockTrajectory",
    "fock_basis",
    "occupations_to_tuple",
    "build_fock_hamiltonian",
    "fock_diagonal",
    "symmetric_sector_matrix",
    "evolve_fock",
    "compare_trajectories",
]

DEFAULT_CAP = 200_000


def fock_basis(n_sites: int, n_bosons: int) -> np.ndarray:
    """All occupation vectors with ``n_bosons`` in total, lexicographic order."""
    states = []
    for bars in itertools.combinations_with_replacement(range(n_sites), n_bosons):
        occ = [0] * n_sites
        for b in bars:
            occ[b] += 1
        states.append(tuple(occ))
    return np.array(sorted(states), dtype=np.int64).reshape(-1, n_sites)


def occupations_to_tuple(occ, site_min: int = 0) -> tuple:
    """Canonical site tuple of an occupation vector."""
    return tuple(site_min + i for i, c in enumerate(occ) for _ in range(int(c)))


def fock_diagonal(spec: LatticeSpec, occ) -> float:
    """``(U/2) sum_{a,b within R} (n_a n_b - δ_ab n_a)`` over window sites."""
    occ = np.asarray(occ, dtype=float)
    sites = spec.sites
    close = cell_distance(spec, sites[:, None], sites[None, :]) <= spec.interaction.R
    pair = np.outer(occ, occ) * close
    return 0.5 * spec.interaction.U * (pair.sum() - occ.sum())


@dataclass
class FockHamiltonian:
    """Number-conserving Hamiltonian on the ``N``-boson Fock basis."""

    spec: LatticeSpec
    n: int
    basis: np.ndarray
    matrix: sp.csr_matrix

    @cached_property
    def index(self) -> dict:
        return {tuple(occ): i for i, occ in enumerate(self.basis.tolist())}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def state_of(self, site_tuple) -> int:
        occ = [0] * self.spec.size
        for s in site_tuple:
            occ[int(s) - self.spec.site_min] += 1
        return self.index[tuple(occ)]


def build_fock_hamiltonian(spec: LatticeSpec, n_bosons: int, cap: int = DEFAULT_CAP) -> FockHamiltonian:
    """Hopping ``c sqrt(n_from) sqrt(n_to + 1)`` plus the pair interaction.

    Raises
    ------
    ValueError
        If the basis dimension ``C(K + N - 1, N)`` exceeds ``cap``.
    """
    k = spec.size
    dim = int(comb(k + n_bosons - 1, n_bosons, exact=True))
    if dim > cap:
        raise ValueError(f"Fock dimension {dim} exceeds cap {cap}")
    basis = fock_basis(k, n_bosons)
    index = {tuple(occ): i for i, occ in enumerate(basis.tolist())}

    bonds = []
    for s in range(k - 1):
        bonds.append((s, s + 1, float(spec.pattern.bond(spec.site_min + s))))
    if spec.boundary is Boundary.PERIODIC and k > 2:
        bonds.append((k - 1, 0, float(spec.pattern.bond(spec.site_max))))

    rows, cols, vals = [], [], []
    for i, occ in enumerate(basis.tolist()):
        rows.append(i)
        cols.append(i)
        vals.append(fock_diagonal(spec, occ))
        for a, b, amp in bonds:
            if amp == 0.0:
                continue
            for src, dst in ((a, b), (b, a)):
                if occ[src] == 0:
                    continue
                new = list(occ)
                new[src] -= 1
                new[dst] += 1
                rows.append(index[tuple(new)])
                cols.append(i)
                vals.append(amp * math.sqrt(occ[src]) * math.sqrt(occ[dst] + 1))
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
    return FockHamiltonian(spec, n_bosons, basis, mat)


def symmetric_sector_matrix(op: SyntheticOperator) -> np.ndarray:
    """Restriction of the full-grid operator to exchange-symmetric fields.

    Basis vector ``T`` is the normalized sum of grid points over the distinct
    permutations of the canonical tuple ``T`` (ordered as ``canonical_tuples``).
    """
    tuples = canonical_tuples(op.spec.sites, op.n)
    rows, cols, vals = [], [], []
    for j, tup in enumerate(tuples):
        perms = sorted(set(itertools.permutations(tup)))
        for p in perms:
            rows.append(op.index(p))
            cols.append(j)
            vals.append(1.0 / math.sqrt(len(perms)))
    basis = sp.csr_matrix((vals, (rows, cols)), shape=(op.dim, len(tuples)))
    return (basis.T @ op.matrix @ basis).toarray()


@dataclass
class FockTrajectory:
    times: np.ndarray
    amplitudes: np.ndarray  # (time, basis state)
    basis: np.ndarray
    site_min: int
    final_norm: float

    def boson_numbers(self) -> np.ndarray:
        return (np.abs(self.amplitudes) ** 2) @ self.basis


def evolve_fock(
    H: FockHamiltonian,
    source,
    t_end: float,
    dt: float = 0.01,
    sample_every: float = 0.1,
    normalize: bool = False,
) -> FockTrajectory:
    """Integrate ``i du/dt = H u + s(t)`` on Fock amplitudes with RK4.

    ``source`` is either an :class:`ExcitationSpec` (zero initial state, the
    pulse enters the matching Fock state with weight ``sqrt(N!/prod ξ!)``) or
    an initial amplitude vector evolved without drive.
    """
    _check_step(float(abs(H.matrix).sum(axis=1).max()), dt)
    stride = max(1, int(round(sample_every / dt)))
    drive_vec = np.zeros(H.dim, dtype=complex)
    if isinstance(source, ExcitationSpec):
        source.check(H.spec, H.n)
        target = H.state_of(source.canonical_tuple)
        weight = math.factorial(H.n)
        for _, c in source.occupancy:
            weight //= math.factorial(c)
        drive_vec[target] = math.sqrt(weight)
        y0 = np.zeros(H.dim, dtype=complex)

        def drive(t):
            return drive_vec * source_envelope(source, t)
    else:
        y0 = np.asarray(source, dtype=complex)
        if y0.shape != (H.dim,):
            raise ValueError("initial state has the wrong dimension")

        def drive(t):
            return drive_vec

    times, amps = [], []

    def observe(t, y):
        times.append(t)
        amps.append(y.copy())

    rk4_drive(H.matrix.dot, drive, y0, t_end, dt, stride, observe)
    amps = np.array(amps)
    final = float(np.linalg.norm(amps[-1]))
    if normalize and final > 0:
        amps = amps / final
    return FockTrajectory(np.array(times), amps, H.basis, H.spec.site_min, final)


def compare_trajectories(
    synthetic_fields: np.ndarray,
    synthetic_times: Sequence[float],
    n_bosons: int,
    fock: FockTrajectory,
) -> float:
    """Largest ``|u_synthetic - u_fock|`` over all samples and configurations.

    ``synthetic_fields`` holds flat full-grid fields, one row per sample.
    """
    synthetic_times = np.asarray(synthetic_times)
    if len(synthetic_times) != len(fock.times) or not np.allclose(synthetic_times, fock.times):
        raise ValueError("trajectories are sampled on different time grids")
    fields = np.asarray(synthetic_fields)
    k = fock.basis.shape[1]
    if fields.shape[1] != k**n_bosons:
        raise ValueError("synthetic grid does not match the Fock lattice")
    idx, factor = [], []
    for occ in fock.basis.tolist():
        tup = occupations_to_tuple(occ)
        idx.append(np.ravel_multi_index(tup, (k,) * n_bosons))
        perms = math.factorial(n_bosons)
        for c in occ:
            perms //= math.factorial(c)
        factor.append(math.sqrt(perms))
    u_synth = fields[:, idx] * np.array(factor)
    return float(np.max(np.abs(u_synth - fock.amplitudes)))
