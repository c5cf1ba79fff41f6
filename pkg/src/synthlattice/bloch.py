"""Band formulas and projected band structures of synthetic-lattice stripes.

A stripe keeps one translation of the infinite synthetic lattice and a finite
window of transverse coordinates. With translation vector ``t`` (unit cells,
``t[0] == 1``) a grid point ``x`` is reduced to the supercell by
``q = cell(x[0])``, ``x -> x - q * t``, and the transverse coordinates are
``l_i = cell(x[i]) - t[i] * cell(x[0])`` for ``i >= 1``. For the diagonal
translation this makes ``l_i`` the pair distances to boson 0.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .model import CouplingPattern, LatticeSpec

__all__ = [
    "analytic_band_tb",
    "ssh1d_band",
    "analytic_band_ssh2d",
    "synthetic_bloch_matrix",
    "StripeGeometry",
    "BandStructure",
    "StripeLayout",
    "stripe_layout",
    "build_stripe_bloch",
    "projected_bands",
    "ssh2d_bulk_reference",
    "tb_diagonal_envelope",
    "ssh2d_diagonal_envelope",
]


def analytic_band_tb(k, g: float = 1.0) -> float:
    """Non-interacting N-boson tight-binding band ``2g sum_i cos k_i``."""
    return float(2.0 * g * np.sum(np.cos(np.asarray(k, dtype=float))))


def ssh1d_band(k, g1: float, g2: float):
    """Upper single-boson SSH band ``sqrt(g1^2 + g2^2 + 2 g1 g2 cos k)``."""
    return np.sqrt(g1**2 + g2**2 + 2.0 * g1 * g2 * np.cos(k))


def analytic_band_ssh2d(k_m: float, k_n: float, g1: float, g2: float) -> np.ndarray:
    """The four two-boson SSH bands at ``(k_m, k_n)``, ascending."""
    a, b = ssh1d_band(k_m, g1, g2), ssh1d_band(k_n, g1, g2)
    return np.sort([-a - b, -a + b, a - b, a + b])


def synthetic_bloch_matrix(pattern: CouplingPattern, n_bosons: int, k) -> np.ndarray:
    """Bloch matrix of the infinite non-interacting synthetic lattice.

    The unit cell holds one grid point per sublattice tuple
    (``sites_per_cell ** n_bosons`` states); ``k`` has one wavevector per axis.
    """
    k = np.broadcast_to(np.asarray(k, dtype=float), (n_bosons,))
    s = pattern.sites_per_cell
    subs = list(itertools.product(range(s), repeat=n_bosons))
    index = {sub: i for i, sub in enumerate(subs)}
    h = np.zeros((len(subs), len(subs)), dtype=complex)
    for sub in subs:
        for ax in range(n_bosons):
            # bond (a, a+1) inside the home cell, or into the next cell
            a = sub[ax]
            amp = float(pattern.bond(a))
            target = list(sub)
            target[ax] = (a + 1) % s
            phase = np.exp(1j * k[ax]) if a + 1 == s else 1.0
            i, j = index[sub], index[tuple(target)]
            h[i, j] += amp * phase
            h[j, i] += amp * np.conj(phase)
    return h


@dataclass(frozen=True)
class StripeGeometry:
    """A quasi-1D cut of the synthetic lattice.

    Parameters
    ----------
    spec : LatticeSpec
        Supplies the coupling pattern and interaction; its window and
        boundary are ignored (the stripe is infinite along ``translation``).
    n_bosons : int
        Grid dimension (1, 2 or 3).
    translation : tuple of int
        Translation vector in unit cells, first component 1, e.g. ``(1, 0)``
        for a stripe along the first axis or ``(1, 1, 1)`` for the diagonal.
    transverse : tuple of (lo, hi)
        Inclusive window of each transverse coordinate ``l_1 .. l_{N-1}``.
    """

    spec: LatticeSpec
    n_bosons: int
    translation: tuple
    transverse: tuple = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.translation)
        if len(t) != self.n_bosons:
            raise ValueError(f"translation {t} does not match {self.n_bosons} bosons")
        if t[0] != 1:
            raise ValueError("translation must have first component 1")
        object.__setattr__(self, "translation", t)
        windows = tuple((int(lo), int(hi)) for lo, hi in self.transverse)
        if len(windows) != self.n_bosons - 1:
            raise ValueError(f"need {self.n_bosons - 1} transverse windows, got {len(windows)}")
        for lo, hi in windows:
            if lo > hi:
                raise ValueError(f"empty transverse window ({lo}, {hi})")
        object.__setattr__(self, "transverse", windows)

    @property
    def dimension(self) -> int:
        return self.n_bosons

    @property
    def sublattice_count(self) -> int:
        return self.spec.pattern.sites_per_cell**self.n_bosons

    @property
    def is_diagonal(self) -> bool:
        return all(x == 1 for x in self.translation)

    @property
    def symmetric_window(self) -> bool:
        return all(lo == -hi for lo, hi in self.transverse)


@dataclass
class BandStructure:
    """Eigenvalues (and optionally eigenvectors) on a grid of ``k_j``.

    ``energies`` has shape ``(len(k_grid), n_bands)``, ascending per row;
    ``eigvecs`` has shape ``(len(k_grid), n_sites, n_bands)`` (columns are
    eigenvectors, as returned by ``eigh``).
    """

    k_grid: np.ndarray
    energies: np.ndarray
    eigvecs: Optional[np.ndarray] = None

    @property
    def n_bands(self) -> int:
        return self.energies.shape[1]


@dataclass(frozen=True)
class StripeLayout:
    """k-independent data of a stripe: supercell sites and hop list."""

    coords: np.ndarray  # (M, N) raw grid coordinates of supercell sites
    transverse: np.ndarray  # (M, N-1) transverse cell coordinates
    sublattice: np.ndarray  # (M, N) sublattice index per axis
    rows: np.ndarray
    cols: np.ndarray
    amps: np.ndarray
    shifts: np.ndarray  # translation count q of each hop
    diag: np.ndarray

    @property
    def size(self) -> int:
        return len(self.coords)

    def site_index(self, coord) -> Optional[int]:
        return self._lookup().get(tuple(int(x) for x in coord))

    def _lookup(self) -> dict:
        cache = self.__dict__.get("_index")
        if cache is None:
            cache = {tuple(c): i for i, c in enumerate(self.coords.tolist())}
            object.__setattr__(self, "_index", cache)
        return cache

    def reduce(self, coord, translation, spc):
        """Map a grid point to (supercell index or None, translation count)."""
        coord = np.asarray(coord)
        q = int(np.floor_divide(coord[0], spc))
        reduced = coord - q * spc * np.asarray(translation)
        return self.site_index(reduced), q


def _onsite(spec: LatticeSpec, coord) -> float:
    u, r = spec.interaction.U, spec.interaction.R
    if u == 0.0:
        return 0.0
    cells = spec.pattern.cell_of(np.asarray(coord))
    count = sum(1 for a, b in itertools.combinations(cells.tolist(), 2) if abs(a - b) <= r)
    return u * count


@lru_cache(maxsize=32)
def stripe_layout(geom: StripeGeometry) -> StripeLayout:
    """Enumerate supercell sites and decompose every hop of the stripe.

    Raises
    ------
    ValueError
        If a hop needs more than one translation to fold back, or if the
        translation is not a symmetry of the hoppings and onsite potential.
    """
    pattern = geom.spec.pattern
    spc = pattern.sites_per_cell
    n = geom.n_bosons
    t = np.asarray(geom.translation)
    shift = spc * t

    coords, trans, subs = [], [], []
    ranges = [range(lo, hi + 1) for lo, hi in geom.transverse]
    for ls in itertools.product(*ranges):
        cells = (0,) + tuple(ls)
        for sub in itertools.product(range(spc), repeat=n):
            coords.append([spc * c + a for c, a in zip(cells, sub)])
            trans.append(ls)
            subs.append(sub)
    coords = np.array(coords, dtype=np.int64).reshape(-1, n)
    layout = StripeLayout(
        coords=coords,
        transverse=np.array(trans, dtype=np.int64).reshape(len(coords), n - 1),
        sublattice=np.array(subs, dtype=np.int64).reshape(-1, n),
        rows=np.zeros(0, dtype=np.int64),
        cols=np.zeros(0, dtype=np.int64),
        amps=np.zeros(0),
        shifts=np.zeros(0, dtype=np.int64),
        diag=np.zeros(0),
    )

    rows, cols, amps, qs, diag = [], [], [], [], []
    for i, x in enumerate(coords):
        d = _onsite(geom.spec, x)
        if _onsite(geom.spec, x + shift) != d:
            raise ValueError("translation does not preserve the onsite potential")
        diag.append(d)
        for ax in range(n):
            for step in (1, -1):
                left = x[ax] if step == 1 else x[ax] - 1
                amp = float(pattern.bond(left))
                if float(pattern.bond(left + shift[ax])) != amp:
                    raise ValueError("translation does not preserve the hoppings")
                if amp == 0.0:
                    continue
                y = x.copy()
                y[ax] += step
                j, q = layout.reduce(y, t, spc)
                if j is None:
                    continue  # leaves the transverse window
                if abs(q) > 1:
                    raise ValueError("supercell too small: hop spans several periods")
                rows.append(i)
                cols.append(j)
                amps.append(amp)
                qs.append(q)

    return StripeLayout(
        coords=coords,
        transverse=layout.transverse,
        sublattice=layout.sublattice,
        rows=np.array(rows, dtype=np.int64),
        cols=np.array(cols, dtype=np.int64),
        amps=np.array(amps),
        shifts=np.array(qs, dtype=np.int64),
        diag=np.array(diag),
    )


def build_stripe_bloch(geom: StripeGeometry, k_j: float) -> np.ndarray:
    """Dense Bloch matrix of the stripe at quasi-momentum ``k_j``.

    Bloch states obey ``psi(x + q t) = exp(i q k_j) psi(x)``, so the hop from
    supercell site ``i`` to the ``q``-th image of site ``j`` enters row ``i``
    with ``exp(i q k_j)``.
    """
    if not -np.pi - 1e-12 <= k_j <= np.pi + 1e-12:
        raise ValueError(f"k_j = {k_j} outside [-pi, pi]")
    lay = stripe_layout(geom)
    h = np.zeros((lay.size, lay.size), dtype=complex)
    np.add.at(h, (lay.rows, lay.cols), lay.amps * np.exp(1j * k_j * lay.shifts))
    h[np.diag_indices(lay.size)] += lay.diag
    return h


def projected_bands(
    geom: StripeGeometry,
    k_count: int,
    keep_vectors: bool = False,
    threads: Optional[int] = None,
    k_grid: Optional[Sequence[float]] = None,
) -> BandStructure:
    """Sweep ``k_j`` uniformly over ``[-pi, pi]`` and diagonalize each point."""
    from .spectra import eigensystem

    if k_grid is None:
        if k_count < 2:
            raise ValueError("k_count must be at least 2")
        k_grid = np.linspace(-np.pi, np.pi, k_count)
    k_grid = np.asarray(k_grid, dtype=float)

    def solve(k):
        return eigensystem(build_stripe_bloch(geom, float(k)), vectors=keep_vectors)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(solve, k_grid))
    else:
        results = [solve(k) for k in k_grid]
    energies = np.array([r[0] for r in results])
    vecs = np.array([r[1] for r in results]) if keep_vectors else None
    return BandStructure(k_grid, energies, vecs)


def ssh2d_bulk_reference(k_grid, g1: float, g2: float, samples: int = 801) -> BandStructure:
    """Bulk bands of the two-boson SSH lattice projected onto ``k_m``.

    Each row holds the four bands evaluated on a dense ``k_n`` grid, so the
    bulk intervals at ``k_m`` are the clusters of that row.
    """
    k_grid = np.asarray(k_grid, dtype=float)
    kn = np.linspace(-np.pi, np.pi, samples)
    en = ssh1d_band(kn, g1, g2)
    rows = []
    for km in k_grid:
        em = ssh1d_band(km, g1, g2)
        rows.append(np.sort(np.concatenate([em + en, em - en, -em + en, -em - en])))
    return BandStructure(k_grid, np.array(rows))


def _diagonal_line(k_j, samples):
    # k_m + k_n = k_j (mod 2 pi); k_m sweeps one full zone
    km = np.linspace(-np.pi, np.pi, samples)
    return km, k_j - km


def tb_diagonal_envelope(k_j: float, n_bosons: int = 2, g: float = 1.0, samples: int = 2001):
    """Min/max of the tight-binding band over ``sum_i k_i = k_j`` (N = 2)."""
    if n_bosons != 2:
        raise NotImplementedError("envelope implemented for two bosons")
    km, kn = _diagonal_line(k_j, samples)
    e = 2 * g * (np.cos(km) + np.cos(kn))
    return float(e.min()), float(e.max())


def ssh2d_diagonal_envelope(k_j: float, g1: float, g2: float, samples: int = 2001):
    """Min/max of each of the four SSH bands over ``k_m + k_n = k_j``."""
    km, kn = _diagonal_line(k_j, samples)
    a, b = ssh1d_band(km, g1, g2), ssh1d_band(kn, g1, g2)
    bands = np.sort(np.stack([-a - b, -a + b, a - b, a + b]), axis=0)
    return bands.min(axis=1), bands.max(axis=1)
