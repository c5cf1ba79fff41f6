"""Hosting-lattice description: couplings, interactions, window, and sources.

Site labels are raw integers. For an alternating (SSH) chain, cell ``k`` holds
site ``C_k = 2k`` and ``D_k = 2k + 1``; for a uniform chain cells and sites
coincide.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "CouplingKind",
    "Boundary",
    "CouplingPattern",
    "InteractionSpec",
    "LatticeSpec",
    "ExcitationSpec",
    "site_c",
    "site_d",
    "coupling_strength",
    "pair_potential",
    "cell_distance",
]


class CouplingKind(str, enum.Enum):
    UNIFORM = "uniform"
    ALTERNATING = "alternating"


class Boundary(str, enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


def site_c(k: int) -> int:
    """Raw label of the C site of cell ``k``."""
    return 2 * k


def site_d(k: int) -> int:
    """Raw label of the D site of cell ``k``."""
    return 2 * k + 1


@dataclass(frozen=True)
class CouplingPattern:
    """Nearest-neighbour hopping pattern of the chain.

    Use :meth:`uniform` or :meth:`alternating` rather than the raw constructor.
    """

    kind: CouplingKind
    g: float = 0.0
    g1: float = 0.0
    g2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", CouplingKind(self.kind))
        for name in ("g", "g1", "g2"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"coupling {name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.kind is CouplingKind.UNIFORM and (self.g1 or self.g2):
            raise ValueError("uniform pattern takes only g")
        if self.kind is CouplingKind.ALTERNATING and self.g:
            raise ValueError("alternating pattern takes only g1, g2")

    @classmethod
    def uniform(cls, g: float = 1.0) -> "CouplingPattern":
        return cls(CouplingKind.UNIFORM, g=g)

    @classmethod
    def alternating(cls, g1: float, g2: float) -> "CouplingPattern":
        return cls(CouplingKind.ALTERNATING, g1=g1, g2=g2)

    @property
    def sites_per_cell(self) -> int:
        return 1 if self.kind is CouplingKind.UNIFORM else 2

    def cell_of(self, site):
        """Cell index of a raw site label (works on arrays)."""
        return np.floor_divide(site, self.sites_per_cell)

    def bond(self, left):
        """Amplitude of the bond ``(left, left + 1)`` on the infinite chain."""
        if self.kind is CouplingKind.UNIFORM:
            return np.full(np.shape(left), self.g)[()] if np.ndim(left) else self.g
        even = np.mod(left, 2) == 0
        return np.where(even, self.g1, self.g2)[()]

    @property
    def max_bond(self) -> float:
        if self.kind is CouplingKind.UNIFORM:
            return abs(self.g)
        return max(abs(self.g1), abs(self.g2))


@dataclass(frozen=True)
class InteractionSpec:
    """Density-density interaction of strength ``U`` within ``R`` unit cells."""

    U: float = 0.0
    R: int = 0

    def __post_init__(self):
        object.__setattr__(self, "U", float(self.U))
        if int(self.R) != self.R or self.R < 0:
            raise ValueError(f"interaction range R must be a nonnegative integer, got {self.R}")
        object.__setattr__(self, "R", int(self.R))


@dataclass(frozen=True)
class LatticeSpec:
    """A finite window of the hosting chain.

    Parameters
    ----------
    pattern : CouplingPattern
    interaction : InteractionSpec
    cell_min, cell_max : int
        Inclusive unit-cell window.
    boundary : Boundary
        ``OPEN`` drops bonds leaving the window; ``PERIODIC`` wraps them.
    n_sites : int, optional
        Keep only the first ``n_sites`` raw sites of the window. This allows
        chains that end halfway through a cell (e.g. a 7-site SSH chain).
    """

    pattern: CouplingPattern
    interaction: InteractionSpec = field(default_factory=InteractionSpec)
    cell_min: int = 0
    cell_max: int = 0
    boundary: Boundary = Boundary.OPEN
    n_sites: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.cell_min > self.cell_max:
            raise ValueError(f"empty cell window [{self.cell_min}, {self.cell_max}]")
        full = (self.cell_max - self.cell_min + 1) * self.pattern.sites_per_cell
        if self.n_sites is not None and not 1 <= self.n_sites <= full:
            raise ValueError(f"n_sites must lie in [1, {full}], got {self.n_sites}")
        if self.boundary is Boundary.PERIODIC and self.size % self.pattern.sites_per_cell:
            raise ValueError("a periodic alternating chain needs whole unit cells")

    @property
    def site_min(self) -> int:
        return self.cell_min * self.pattern.sites_per_cell

    @property
    def size(self) -> int:
        if self.n_sites is not None:
            return self.n_sites
        return (self.cell_max - self.cell_min + 1) * self.pattern.sites_per_cell

    @property
    def site_max(self) -> int:
        return self.site_min + self.size - 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.site_min, self.site_max + 1)

    @property
    def n_cells(self) -> int:
        return -(-self.size // self.pattern.sites_per_cell)

    def cell_of(self, site):
        return self.pattern.cell_of(site)

    def contains(self, site) -> bool:
        return self.site_min <= site <= self.site_max

    def wrap(self, site: int) -> int:
        """Fold a raw label into the window (periodic boundary only)."""
        if self.boundary is Boundary.PERIODIC:
            return self.site_min + (site - self.site_min) % self.size
        return site

    def bond_amplitudes(self) -> np.ndarray:
        """Amplitude of bond ``(s, s+1)`` for every window site ``s``.

        The last entry is the wrap-around bond for a periodic chain and 0 for
        an open one.
        """
        amps = np.asarray(self.pattern.bond(self.sites), dtype=float).copy()
        if self.boundary is Boundary.OPEN or self.size <= 2:
            amps[-1] = 0.0
        return amps


def coupling_strength(spec: LatticeSpec, site_a: int, site_b: int) -> Optional[float]:
    """Hopping amplitude between two adjacent raw sites.

    Returns ``None`` when the bond leaves the window of an open chain.

    Raises
    ------
    ValueError
        If the sites are not nearest neighbours.
    """
    a, b = int(site_a), int(site_b)
    inside = spec.contains(a), spec.contains(b)
    if spec.boundary is Boundary.PERIODIC:
        a, b = spec.wrap(a), spec.wrap(b)
        lo, hi = min(a, b), max(a, b)
        if hi - lo == 1:
            return float(spec.pattern.bond(lo))
        if lo == spec.site_min and hi == spec.site_max and spec.size > 2:
            return float(spec.pattern.bond(hi))
        raise ValueError(f"sites {site_a} and {site_b} are not adjacent")
    if abs(a - b) != 1:
        raise ValueError(f"sites {site_a} and {site_b} are not adjacent")
    if not all(inside):
        if not any(inside):
            raise ValueError(f"bond ({site_a}, {site_b}) lies outside the window")
        return None
    return float(spec.pattern.bond(min(a, b)))


def cell_distance(spec: LatticeSpec, site_a, site_b):
    """Unit-cell separation; minimum image on a periodic chain."""
    d = np.abs(spec.cell_of(site_a) - spec.cell_of(site_b))
    if spec.boundary is Boundary.PERIODIC:
        d = np.minimum(d, spec.n_cells - d)
    return d


def pair_potential(spec: LatticeSpec, site_a: int, site_b: int) -> float:
    """Interaction energy of one boson pair: ``U`` within range ``R``, else 0."""
    for s in (site_a, site_b):
        if not spec.contains(s):
            raise ValueError(f"site {s} outside window [{spec.site_min}, {spec.site_max}]")
    if cell_distance(spec, site_a, site_b) <= spec.interaction.R:
        return spec.interaction.U
    return 0.0


@dataclass(frozen=True)
class ExcitationSpec:
    """Gaussian-modulated source placing ``count`` bosons on each listed site.

    ``occupancy`` is a tuple of ``(site, count)`` pairs sorted by site.
    """

    occupancy: tuple
    delta_e: float = 0.0
    t0: float = 10.0
    tau2: float = 10.0
    eta0: float = 1.0

    def __post_init__(self):
        merged: dict = {}
        for site, count in self.occupancy:
            if int(count) <= 0:
                raise ValueError(f"occupancy of site {site} must be positive")
            merged[int(site)] = merged.get(int(site), 0) + int(count)
        object.__setattr__(self, "occupancy", tuple(sorted(merged.items())))
        if self.tau2 <= 0:
            raise ValueError("tau2 must be positive")

    @classmethod
    def at_sites(cls, sites, **kwargs) -> "ExcitationSpec":
        """One boson per entry of ``sites``; repeat a site to stack bosons."""
        return cls(tuple((s, 1) for s in sites), **kwargs)

    @property
    def n_bosons(self) -> int:
        return sum(c for _, c in self.occupancy)

    @property
    def canonical_tuple(self) -> tuple:
        return tuple(s for s, c in self.occupancy for _ in range(c))

    @property
    def tau(self) -> float:
        return float(np.sqrt(self.tau2))

    def check(self, spec: LatticeSpec, n_bosons: int) -> None:
        for site, _ in self.occupancy:
            if not spec.contains(site):
                raise ValueError(f"excited site {site} outside the lattice window")
        if self.n_bosons != n_bosons:
            raise ValueError(f"excitation places {self.n_bosons} bosons, run has {n_bosons}")
