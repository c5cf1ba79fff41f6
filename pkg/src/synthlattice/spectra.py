"""Hermitian eigensolves and physical labelling of eigenstates."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import scipy.linalg as la

from .bloch import BandStructure, StripeGeometry, stripe_layout

__all__ = [
    "EigenPair",
    "Category",
    "Parity",
    "ModeLabel",
    "eigensystem",
    "hermitian_eig",
    "localization_weight",
    "band_intervals",
    "detect_gap_modes",
    "reflection_operator",
    "parity_of",
    "parity_classify",
    "resolve_parities",
    "triplon_region",
    "region_weights",
    "classify_band_by_region",
    "boundary_region",
    "interface_region",
    "classify_localization",
]

HERMITIAN_RTOL = 1e-12
RESIDUAL_RTOL = 1e-9


class Category(str, enum.Enum):
    BULK = "Bulk"
    EDGE = "Edge"
    INTERFACE = "Interface"
    SCATTERING = "Scattering"
    DIMER_MONOMER = "DimerMonomer"
    WEAK_TRIPLON = "WeakTriplon"
    TIGHT_TRIPLON = "TightTriplon"


class Parity(str, enum.Enum):
    SYMMETRIC = "Symmetric"
    ANTISYMMETRIC = "Antisymmetric"
    MIXED = "Mixed"


@dataclass
class EigenPair:
    energy: float
    vector: np.ndarray


@dataclass
class ModeLabel:
    category: Category
    parity: Parity = Parity.MIXED
    localization: float = 0.0


def eigensystem(matrix, vectors: bool = True, check: bool = True):
    """Full eigendecomposition of a dense Hermitian matrix.

    Returns ``(energies, vectors)`` with ascending energies and eigenvectors
    as columns (``None`` when ``vectors`` is false).

    Raises
    ------
    ValueError
        If the input is not Hermitian within ``1e-12`` relative.
    ArithmeticError
        If an eigenpair residual exceeds ``1e-9 * ||H||``.
    """
    h = np.asarray(matrix)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    scale = max(np.max(np.abs(h)), 1e-300) if h.size else 1.0
    if check and h.size and np.max(np.abs(h - h.conj().T)) > HERMITIAN_RTOL * scale:
        raise ValueError("matrix is not Hermitian")
    if not vectors:
        return la.eigh(h, eigvals_only=True, check_finite=False), None
    w, v = la.eigh(h, check_finite=False)
    if check and h.size:
        norm = la.norm(h, 2) if h.shape[0] <= 64 else la.norm(h, 1)
        resid = np.linalg.norm(h @ v - v * w, axis=0).max()
        if resid > RESIDUAL_RTOL * max(norm, 1e-300):
            raise ArithmeticError(f"eigen-residual {resid:.3e} exceeds tolerance")
    return w, v


def hermitian_eig(matrix) -> List[EigenPair]:
    """All eigenpairs of a Hermitian matrix, energies ascending."""
    w, v = eigensystem(matrix)
    return [EigenPair(float(e), v[:, i]) for i, e in enumerate(w)]


def localization_weight(pair, region) -> float:
    """Probability weight of an eigenvector on a set of sites.

    ``region`` is a boolean mask or an index sequence over the vector.
    """
    vec = pair.vector if isinstance(pair, EigenPair) else np.asarray(pair)
    region = np.asarray(region)
    if region.dtype == bool:
        if region.shape != vec.shape:
            raise ValueError("mask shape does not match the vector")
        idx = np.flatnonzero(region)
    else:
        idx = region.astype(int).ravel()
    if idx.size == 0:
        raise ValueError("empty region")
    if idx.min() < 0 or idx.max() >= vec.size:
        raise ValueError("region indices outside the site set")
    return float(np.sum(np.abs(vec[np.unique(idx)]) ** 2))


def band_intervals(energies: np.ndarray, merge_gap: float = 0.1) -> np.ndarray:
    """Cluster sorted energies into ``[lo, hi]`` intervals.

    Neighbouring values closer than ``merge_gap`` share an interval.
    """
    e = np.sort(np.asarray(energies, dtype=float))
    if e.size == 0:
        return np.zeros((0, 2))
    breaks = np.flatnonzero(np.diff(e) > merge_gap)
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [e.size - 1]])
    return np.stack([e[starts], e[ends]], axis=1)


def detect_gap_modes(
    bands: BandStructure,
    bulk_reference: BandStructure,
    margin: float = 0.02,
    merge_gap: float = 0.1,
):
    """Flag eigenvalues lying outside every bulk interval by more than ``margin``.

    Returns a list of ``(k index, band index)``.
    """
    if len(bands.k_grid) != len(bulk_reference.k_grid) or not np.allclose(
        bands.k_grid, bulk_reference.k_grid
    ):
        raise ValueError("bands and bulk reference use different k grids")
    flagged = []
    for ik in range(len(bands.k_grid)):
        iv = band_intervals(bulk_reference.energies[ik], merge_gap)
        e = bands.energies[ik][:, None]
        inside = (e >= iv[:, 0] - margin) & (e <= iv[:, 1] + margin)
        for ib in np.flatnonzero(~inside.any(axis=1)):
            flagged.append((ik, int(ib)))
    return flagged


def reflection_operator(geom: StripeGeometry, k_j: float = 0.0, axes=(0, 1)) -> np.ndarray:
    """Matrix of the boson exchange swapping grid ``axes`` on the supercell.

    For the two-boson stripe this is the mirror ``m <-> n`` (``l -> -l``, with
    ``C_m D_n <-> D_m C_n``).

    Raises
    ------
    ValueError
        If the image of some supercell site falls outside the window.
    """
    lay = stripe_layout(geom)
    spc = geom.spec.pattern.sites_per_cell
    perm = list(range(geom.n_bosons))
    perm[axes[0]], perm[axes[1]] = perm[axes[1]], perm[axes[0]]
    p = np.zeros((lay.size, lay.size), dtype=complex)
    for i, x in enumerate(lay.coords):
        j, q = lay.reduce(x[perm], geom.translation, spc)
        if j is None:
            raise ValueError("transverse window is not symmetric under the exchange")
        p[i, j] = np.exp(1j * q * k_j)
    return p


def parity_of(vector, p: np.ndarray, tol: float = 1e-6) -> Parity:
    v = np.asarray(vector)
    pv = p @ v
    if np.linalg.norm(v - pv) < tol:
        return Parity.SYMMETRIC
    if np.linalg.norm(v + pv) < tol:
        return Parity.ANTISYMMETRIC
    return Parity.MIXED


def parity_classify(pair: EigenPair, geom: StripeGeometry, k_j: float = 0.0) -> Parity:
    """Exchange parity of a single eigenpair (no degeneracy handling)."""
    if not geom.symmetric_window:
        raise ValueError("parity needs a transverse window symmetric about 0")
    return parity_of(pair.vector, reflection_operator(geom, k_j))


def resolve_parities(
    energies: Sequence[float],
    vectors: np.ndarray,
    geom: StripeGeometry,
    k_j: float = 0.0,
    degeneracy_tol: float = 1e-8,
):
    """Rotate degenerate eigenspaces into exchange eigenvectors and label them.

    Returns ``(vectors, parities)``; ``vectors`` has the input column layout.
    """
    if not geom.symmetric_window:
        raise ValueError("parity needs a transverse window symmetric about 0")
    p = reflection_operator(geom, k_j)
    e = np.asarray(energies)
    v = np.array(vectors, dtype=complex, copy=True)
    start = 0
    while start < len(e):
        stop = start + 1
        while stop < len(e) and e[stop] - e[stop - 1] < degeneracy_tol:
            stop += 1
        if stop - start > 1:
            block = v[:, start:stop]
            pb = block.conj().T @ p @ block
            pb = 0.5 * (pb + pb.conj().T)
            _, rot = np.linalg.eigh(pb)
            v[:, start:stop] = block @ rot
        start = stop
    return v, [parity_of(v[:, i], p) for i in range(v.shape[1])]


def triplon_region(l1: int, l2: int, R: int) -> Category:
    """Region of the relative-coordinate plane of three bosons.

    Counts the pair distances ``|l1|``, ``|l2|``, ``|l1 - l2|`` within ``R``.
    """
    count = int(abs(l1) <= R) + int(abs(l2) <= R) + int(abs(l1 - l2) <= R)
    return (
        Category.SCATTERING,
        Category.DIMER_MONOMER,
        Category.WEAK_TRIPLON,
        Category.TIGHT_TRIPLON,
    )[count]


_TRIPLON_ORDER = (
    Category.SCATTERING,
    Category.DIMER_MONOMER,
    Category.WEAK_TRIPLON,
    Category.TIGHT_TRIPLON,
)


def _region_codes(geom: StripeGeometry) -> np.ndarray:
    lay = stripe_layout(geom)
    r = geom.spec.interaction.R
    l1, l2 = lay.transverse[:, 0], lay.transverse[:, 1]
    return (np.abs(l1) <= r).astype(int) + (np.abs(l2) <= r) + (np.abs(l1 - l2) <= r)


def region_weights(vector, geom: StripeGeometry) -> dict:
    """Weight of a three-boson stripe vector in each of the four regions."""
    if geom.n_bosons != 3:
        raise ValueError("region classification needs a three-boson stripe")
    prob = np.abs(np.asarray(vector)) ** 2
    codes = _region_codes(geom)
    return {cat: float(prob[codes == c].sum()) for c, cat in enumerate(_TRIPLON_ORDER)}


def classify_band_by_region(pair: EigenPair, geom: StripeGeometry) -> ModeLabel:
    """Label a three-boson eigenstate by the region holding most of its weight."""
    weights = region_weights(pair.vector, geom)
    total = sum(weights.values())
    cat = max(_TRIPLON_ORDER, key=lambda c: weights[c])
    return ModeLabel(cat, Parity.MIXED, weights[cat] / total if total else 0.0)


def boundary_region(geom: StripeGeometry, shell: int = 2) -> np.ndarray:
    """Mask of supercell sites within ``shell`` cells of a transverse edge."""
    lay = stripe_layout(geom)
    mask = np.zeros(lay.size, dtype=bool)
    for ax, (lo, hi) in enumerate(geom.transverse):
        l = lay.transverse[:, ax]
        mask |= (l <= lo + shell) | (l >= hi - shell)
    return mask


def interface_region(geom: StripeGeometry, shell: int = 2) -> np.ndarray:
    """Mask of two-boson stripe sites with ``||l| - R| <= shell``."""
    if geom.n_bosons != 2:
        raise ValueError("interface region defined for two-boson stripes")
    lay = stripe_layout(geom)
    l = np.abs(lay.transverse[:, 0])
    return np.abs(l - geom.spec.interaction.R) <= shell


def classify_localization(
    pair: EigenPair, geom: StripeGeometry, threshold: float = 0.9, shell: int = 2
) -> ModeLabel:
    """Edge, Interface or Bulk by weight within ``shell`` cells of the region.

    Interfaces are only considered for interacting two-boson stripes.
    """
    edge = localization_weight(pair, boundary_region(geom, shell)) if geom.transverse else 0.0
    if edge > threshold:
        return ModeLabel(Category.EDGE, Parity.MIXED, edge)
    if geom.n_bosons == 2 and geom.spec.interaction.U != 0.0:
        inter = localization_weight(pair, interface_region(geom, shell))
        if inter > threshold:
            return ModeLabel(Category.INTERFACE, Parity.MIXED, inter)
    return ModeLabel(Category.BULK, Parity.MIXED, edge)
