"""Mapping of N bosons on a chain onto one particle on an N-dimensional grid.

The wavefunction ``v[λ1, ..., λN]`` lives on the full product of the site
window. Hops move one coordinate by one site with the chain's bond amplitude;
the diagonal carries ``U`` for every boson pair within the interaction range.
Exchange symmetry is a property of states, not of the operator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .model import LatticeSpec, cell_distance

__all__ = [
    "canonical",
    "multiplicities",
    "canonical_tuples",
    "SyntheticOperator",
    "AmplitudeField",
    "build_synthetic_operator",
    "onsite_potential",
    "v_to_u",
    "symmetrize",
    "symmetry_violation",
    "correlation",
    "boson_number_distribution",
]


def canonical(tup: Iterable[int]) -> tuple:
    return tuple(sorted(int(x) for x in tup))


def multiplicities(tup: Iterable[int]) -> tuple:
    """Occupation counts of the distinct sites of a tuple, in site order."""
    counts: dict = {}
    for x in tup:
        counts[x] = counts.get(x, 0) + 1
    return tuple(counts[k] for k in sorted(counts))


def _n_perms(tup) -> int:
    n = len(tup)
    out = math.factorial(n)
    for c in multiplicities(tup):
        out //= math.factorial(c)
    return out


def canonical_tuples(sites: Iterable[int], n: int):
    """All sorted N-tuples of window sites (the bosonic configurations)."""
    return list(itertools.combinations_with_replacement(sorted(sites), n))


@dataclass
class SyntheticOperator:
    """Sparse Hermitian operator on the full N-fold site grid.

    Attributes
    ----------
    spec : LatticeSpec
    n : int
        Number of bosons, i.e. grid dimension.
    rows, cols, amps : ndarray
        Off-diagonal hopping entries (flat grid indices, real amplitudes).
    diag : ndarray
        Onsite potential per grid point.
    """

    spec: LatticeSpec
    n: int
    rows: np.ndarray
    cols: np.ndarray
    amps: np.ndarray
    diag: np.ndarray

    @property
    def shape(self) -> tuple:
        return (self.spec.size,) * self.n

    @property
    def dim(self) -> int:
        return self.spec.size**self.n

    @cached_property
    def matrix(self) -> sp.csr_matrix:
        size = self.dim
        hop = sp.coo_matrix((self.amps, (self.rows, self.cols)), shape=(size, size))
        return (hop + sp.diags(self.diag)).tocsr()

    @property
    def norm_bound(self) -> float:
        """Gershgorin bound on the spectral radius (max absolute row sum)."""
        return float(abs(self.matrix).sum(axis=1).max())

    def is_hermitian(self) -> bool:
        m = self.matrix
        return (m != m.T.conj()).nnz == 0 and np.all(np.isreal(self.diag))

    def index(self, tup) -> int:
        offs = [int(x) - self.spec.site_min for x in tup]
        return int(np.ravel_multi_index(offs, self.shape))

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Act on a field given either flat or with grid shape."""
        flat = np.asarray(v).reshape(-1)
        return (self.matrix @ flat).reshape(np.shape(v))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def _pair_count_grid(spec: LatticeSpec, n: int) -> np.ndarray:
    """Number of boson pairs within range at every grid point."""
    sites = spec.sites
    close = (cell_distance(spec, sites[:, None], sites[None, :]) <= spec.interaction.R).astype(float)
    total = np.zeros((spec.size,) * n)
    for i, j in itertools.combinations(range(n), 2):
        shape = [1] * n
        shape[i], shape[j] = spec.size, spec.size
        total = total + close.reshape(shape)
    return total


def build_synthetic_operator(spec: LatticeSpec, n_bosons: int) -> SyntheticOperator:
    """Assemble the synthetic-lattice operator for ``n_bosons`` on ``spec``.

    Each grid point hops along every axis to the neighbouring site with the
    chain's bond amplitude (open boundaries drop the hop). The diagonal is
    ``U`` times the number of boson pairs within ``R`` unit cells.
    """
    if n_bosons < 1:
        raise ValueError(f"need at least one boson, got {n_bosons}")
    size = spec.size
    shape = (size,) * n_bosons
    bonds = spec.bond_amplitudes()
    grid = np.indices(shape).reshape(n_bosons, -1)
    flat = np.arange(size**n_bosons)
    strides = [size ** (n_bosons - 1 - ax) for ax in range(n_bosons)]

    rows, cols, amps = [], [], []
    for ax in range(n_bosons):
        pos = grid[ax]
        amp = bonds[pos]
        keep = amp != 0.0
        # forward neighbour, wrapping at the end of the window
        nxt = np.where(pos == size - 1, flat - (size - 1) * strides[ax], flat + strides[ax])
        src, dst, a = flat[keep], nxt[keep], amp[keep]
        if size == 1:
            continue
        rows += [src, dst]
        cols += [dst, src]
        amps += [a, a]

    if rows:
        rows_a = np.concatenate(rows)
        cols_a = np.concatenate(cols)
        amps_a = np.concatenate(amps)
    else:
        rows_a = cols_a = np.zeros(0, dtype=np.int64)
        amps_a = np.zeros(0)

    if n_bosons > 1 and spec.interaction.U != 0.0:
        diag = spec.interaction.U * _pair_count_grid(spec, n_bosons).reshape(-1)
    else:
        diag = np.zeros(size**n_bosons)
    return SyntheticOperator(spec, n_bosons, rows_a, cols_a, amps_a, diag)


def onsite_potential(spec: LatticeSpec, tup) -> float:
    """``U`` times the number of unordered boson pairs within range."""
    tup = [int(x) for x in tup]
    for x in tup:
        if not spec.contains(x):
            raise ValueError(f"site {x} outside the window")
    pairs = sum(
        1 for a, b in itertools.combinations(tup, 2) if cell_distance(spec, a, b) <= spec.interaction.R
    )
    return spec.interaction.U * pairs


@dataclass
class AmplitudeField:
    """Exchange-symmetric amplitude ``v`` over the N-fold site window."""

    n: int
    site_min: int
    data: np.ndarray
    time: float = 0.0
    sites: np.ndarray = field(init=False)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.ndim != self.n:
            raise ValueError(f"data has {self.data.ndim} axes, expected {self.n}")
        if len(set(self.data.shape)) > 1:
            raise ValueError("all axes must span the same site window")
        self.sites = np.arange(self.site_min, self.site_min + self.data.shape[0])

    @classmethod
    def zeros(cls, spec: LatticeSpec, n: int) -> "AmplitudeField":
        return cls(n, spec.site_min, np.zeros((spec.size,) * n, dtype=complex))

    @classmethod
    def from_u(cls, spec: LatticeSpec, n: int, amplitudes: dict) -> "AmplitudeField":
        """Build a symmetric field from Fock amplitudes keyed by canonical tuple."""
        f = cls.zeros(spec, n)
        for tup, u in amplitudes.items():
            tup = canonical(tup)
            v = u / math.sqrt(_n_perms(tup))
            for perm in set(itertools.permutations(tup)):
                f.data[f.offset(perm)] = v
        return f

    def offset(self, tup) -> tuple:
        return tuple(int(x) - self.site_min for x in tup)

    def __getitem__(self, tup):
        return self.data[self.offset(tup)]

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


def v_to_u(field: AmplitudeField, tup) -> complex:
    """Fock amplitude of the configuration ``tup``: ``sqrt(N!/prod ξ!) v``."""
    tup = tuple(int(x) for x in tup)
    if list(tup) != sorted(tup):
        raise ValueError(f"tuple {tup} is not in canonical (ascending) order")
    return complex(math.sqrt(_n_perms(tup)) * field[tup])


def _axis_perms(n):
    return list(itertools.permutations(range(n)))


def symmetrize(raw: np.ndarray, site_min: int = 0, time: float = 0.0) -> AmplitudeField:
    """Average a raw grid array over all axis permutations."""
    raw = np.asarray(raw, dtype=complex)
    perms = _axis_perms(raw.ndim)
    data = sum(np.transpose(raw, p) for p in perms) / len(perms)
    return AmplitudeField(raw.ndim, site_min, data, time)


def symmetry_violation(data: np.ndarray) -> float:
    """Largest change of any entry under an axis permutation."""
    data = np.asarray(data)
    return max(
        (float(np.max(np.abs(data - np.transpose(data, p)))) for p in _axis_perms(data.ndim)),
        default=0.0,
    )


def correlation(field: AmplitudeField, tup) -> float:
    """N-th order correlation ``|v|^2`` at one grid point."""
    return float(abs(field[tuple(tup)]) ** 2)


def boson_number_distribution(field: AmplitudeField, return_norm: bool = False):
    """Mean boson number on every window site.

    Sums ``occupancy_k(T) |u_T|^2`` over configurations; on the full grid this
    is the sum of the per-axis marginals of ``|v|^2``. With ``return_norm``
    the squared norm is returned alongside (the values are not rescaled).
    """
    prob = np.abs(field.data) ** 2
    out = np.zeros(prob.shape[0])
    for ax in range(field.n):
        others = tuple(a for a in range(field.n) if a != ax)
        out += prob.sum(axis=others) if others else prob
    if return_norm:
        return out, float(prob.sum())
    return out
