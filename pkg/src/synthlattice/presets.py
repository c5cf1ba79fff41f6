"""Named run configurations, one per reference scenario.

Energies in units of ``g``, times in units of ``1/g``.
"""

from __future__ import annotations

import copy

SSH_TRIVIAL = {"pattern": "alternating", "g1": 3.0, "g2": 1.0}
SSH_NONTRIVIAL = {"pattern": "alternating", "g1": 1.0, "g2": 3.0}
CHAIN_31_CELLS = {"cell_min": -15, "cell_max": 15, "boundary": "open"}
PULSE = {"t0": 10.0, "tau2": 10.0, "eta0": 1.0}


def _evolve(pattern, U, R, sites, delta_e, t_end=50.0, snapshots=(40.0,)):
    return {
        "mode": "evolve",
        "lattice": {**pattern, "U": U, "R": R, **CHAIN_31_CELLS},
        "n_bosons": 2,
        "excitation": {"sites": list(sites), "delta_e": delta_e, **PULSE},
        "dt": 0.01,
        "t_end": t_end,
        "sample_every": 0.1,
        "snapshot_times": list(snapshots),
    }


def _stripe(mode, pattern, U, R, translation, k_count):
    return {
        "mode": mode,
        "lattice": {**pattern, "U": U, "R": R},
        "n_bosons": len(translation),
        "geometry": {"translation": list(translation), "transverse": [[-15, 15]] * (len(translation) - 1)},
        "k_count": k_count,
    }


PRESETS = {
    "fig1c": (
        "two-boson tight-binding bands over the Brillouin zone",
        {"mode": "bands", "lattice": {"pattern": "uniform", "g": 1.0}, "n_bosons": 2, "k_count": 41},
    ),
    "fig2c": (
        "two-boson SSH bands, g1=3g, g2=g",
        {"mode": "bands", "lattice": dict(SSH_TRIVIAL), "n_bosons": 2, "k_count": 41},
    ),
    "fig3a": (
        "SSH stripe along m, -15<=n<=15, trivial (3g, g)",
        _stripe("stripe", SSH_TRIVIAL, 0.0, 0, (1, 0), 101),
    ),
    "fig3b": (
        "SSH stripe along m, -15<=n<=15, nontrivial (g, 3g): in-gap edge branches",
        _stripe("stripe", SSH_NONTRIVIAL, 0.0, 0, (1, 0), 101),
    ),
    "fig4a": (
        "excite C_0 and D_15, g1=g, g2=3g, dE=3.16g, t0=10/g, tau^2=10/g^2",
        _evolve(SSH_NONTRIVIAL, 0.0, 0, (0, 31), 3.16),
    ),
    "fig4c": (
        "excite two bosons on C_0, g1=g, g2=3g, dE=0",
        _evolve(SSH_NONTRIVIAL, 0.0, 0, (0, 0), 0.0),
    ),
    "fig4e": (
        "excite C_0 and D_15, g1=3g, g2=g, dE=0",
        _evolve(SSH_TRIVIAL, 0.0, 0, (0, 31), 0.0),
    ),
    "fig5b": (
        "diagonal SSH stripe, U=2g, R=6, (3g, g), -15<=l<=15",
        _stripe("classify", SSH_TRIVIAL, 2.0, 6, (1, 1), 41),
    ),
    "fig5c": (
        "diagonal SSH stripe, U=2g, R=6, (g, 3g), -15<=l<=15: interface modes near g",
        _stripe("classify", SSH_NONTRIVIAL, 2.0, 6, (1, 1), 41),
    ),
    "fig7a": (
        "excite C_0 and D_6, U=2g, R=6, g1=g, g2=3g, dE=g",
        _evolve(SSH_NONTRIVIAL, 2.0, 6, (0, 13), 1.0),
    ),
    "fig7b": (
        "excite C_0 and D_6, U=2g, R=6, g1=3g, g2=g, dE=g",
        _evolve(SSH_TRIVIAL, 2.0, 6, (0, 13), 1.0),
    ),
    "fig7c": (
        "excite two bosons on C_0, U=2g, R=6, g1=g, g2=3g, dE=g",
        _evolve(SSH_NONTRIVIAL, 2.0, 6, (0, 0), 1.0),
    ),
    "fig7d": (
        "excite C_0 and D_6, U=0, R=6, g1=g, g2=3g, dE=0",
        _evolve(SSH_NONTRIVIAL, 0.0, 6, (0, 13), 0.0),
    ),
    "fig9a": (
        "three-boson tight-binding diagonal stripe, U=12g, R=6, -15<=l1,l2<=15",
        _stripe("classify", {"pattern": "uniform", "g": 1.0}, 12.0, 6, (1, 1, 1), 17),
    ),
}


def list_presets():
    """``(name, description)`` for every preset, in listing order."""
    return [(name, desc) for name, (desc, _) in PRESETS.items()]


def get_preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name][1])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}") from None
