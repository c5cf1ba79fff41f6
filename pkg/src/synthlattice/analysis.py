"""Observables used to compare runs against the expected physical picture."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .bloch import StripeGeometry, build_stripe_bloch, stripe_layout
from .model import InteractionSpec, LatticeSpec
from .spectra import band_intervals, eigensystem
from .synth import build_synthetic_operator

__all__ = [
    "edge_mode_profile",
    "spreading_asymmetry",
    "band_shift",
    "spectral_clusters",
]


def edge_mode_profile(spec: LatticeSpec, site: int, n_modes: int = 2) -> np.ndarray:
    """Single-boson density of an edge-mode excitation at ``site``.

    The site vector is projected onto the ``n_modes`` eigenstates of the
    non-interacting open chain closest to zero energy, and the resulting
    density is normalized to one boson.
    """
    free = replace(spec, interaction=InteractionSpec())
    w, v = eigensystem(build_synthetic_operator(free, 1).dense())
    modes = v[:, np.argsort(np.abs(w))[:n_modes]]
    e = np.zeros(spec.size)
    e[site - spec.site_min] = 1.0
    proj = modes @ (modes.conj().T @ e)
    dens = np.abs(proj) ** 2
    return dens / dens.sum()


def spreading_asymmetry(numbers, spec: LatticeSpec, background=None, center_cell: int = 0) -> float:
    """``|L - R| / (L + R)`` of boson number left and right of ``center_cell``.

    ``background`` (same shape as ``numbers``) is subtracted first, e.g. the
    density of a boson parked in an edge mode. The centre cell itself counts
    on neither side.
    """
    n = np.asarray(numbers, dtype=float)
    if background is not None:
        n = n - np.asarray(background, dtype=float)
    cells = spec.cell_of(spec.sites)
    left = n[cells < center_cell].sum()
    right = n[cells > center_cell].sum()
    return float(abs(left - right) / (left + right))


def band_shift(geom: StripeGeometry, k_grid, split: float, inner_weight: float = 0.5):
    """Shift of the upper quasi-continuum edges caused by the interaction.

    For every ``k_j`` the non-interacting stripe's states above ``split`` form
    the reference band. In the interacting stripe, the lifted copy consists
    of states with more than ``inner_weight`` of their weight inside the
    interaction range ``|l| <= R`` and energy above the midpoint of the
    reference gap below the band, raised by ``U``.

    Returns
    -------
    (low, high) : ndarray
        Shifts of the lower and upper band edges, one per ``k_j``.
    """
    spec = geom.spec
    u, r = spec.interaction.U, spec.interaction.R
    free = StripeGeometry(replace(spec, interaction=InteractionSpec()), geom.n_bosons,
                          geom.translation, geom.transverse)
    inside = np.all(np.abs(stripe_layout(geom).transverse) <= r, axis=1)
    low, high = [], []
    for k in k_grid:
        e0, _ = eigensystem(build_stripe_bloch(free, float(k)), vectors=False)
        upper = e0[e0 > split]
        mid_top = e0[e0 <= split].max()
        cut = 0.5 * (mid_top + upper.min()) + u
        e, v = eigensystem(build_stripe_bloch(geom, float(k)))
        w_in = np.sum(np.abs(v[inside]) ** 2, axis=0)
        lifted = e[(w_in > inner_weight) & (e > cut)]
        if lifted.size == 0:
            raise ValueError(f"no lifted states at k_j = {k}")
        low.append(lifted.min() - upper.min())
        high.append(lifted.max() - upper.max())
    return np.array(low), np.array(high)


def spectral_clusters(energies, min_gap: float = 2.0) -> np.ndarray:
    """Group a spectrum into bands separated by gaps wider than ``min_gap``."""
    return band_intervals(energies, merge_gap=min_gap)
