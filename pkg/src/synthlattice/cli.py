"""Configuration-driven experiment runner.

Usage::

    synthlattice run CONFIG.json [--out DIR] [--threads N]
    synthlattice preset NAME [--out DIR] [--threads N]
    synthlattice list-presets

Exit status: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import enum
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bloch import (
    StripeGeometry,
    analytic_band_ssh2d,
    analytic_band_tb,
    projected_bands,
    ssh2d_bulk_reference,
    synthetic_bloch_matrix,
)
from .dynamics import SourceTerm, evolve, excitation_probability_map
from .model import (
    Boundary,
    CouplingKind,
    CouplingPattern,
    ExcitationSpec,
    InteractionSpec,
    LatticeSpec,
)
from .oracle import build_fock_hamiltonian, compare_trajectories, evolve_fock, symmetric_sector_matrix
from .presets import get_preset, list_presets
from .spectra import (
    EigenPair,
    classify_band_by_region,
    classify_localization,
    detect_gap_modes,
    eigensystem,
    resolve_parities,
)
from .synth import build_synthetic_operator

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


class Mode(str, enum.Enum):
    BANDS = "bands"
    STRIPE = "stripe"
    EVOLVE = "evolve"
    CLASSIFY = "classify"
    ORACLE_CHECK = "oracle_check"


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _require(d: dict, key: str, where: str):
    if key not in d or d[key] is None:
        raise ConfigError(f"missing field '{where}{key}'")
    return d[key]


def _positive(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"field '{name}' must be a number") from None
    if not value > 0:
        raise ConfigError(f"field '{name}' must be positive")
    return value


def parse_lattice(d: dict) -> LatticeSpec:
    if not isinstance(d, dict):
        raise ConfigError("field 'lattice' must be an object")
    kind = _require(d, "pattern", "lattice.")
    try:
        if CouplingKind(kind) is CouplingKind.UNIFORM:
            pattern = CouplingPattern.uniform(float(d.get("g", 1.0)))
        else:
            pattern = CouplingPattern.alternating(
                float(_require(d, "g1", "lattice.")), float(_require(d, "g2", "lattice."))
            )
        return LatticeSpec(
            pattern,
            InteractionSpec(float(d.get("U", 0.0)), int(d.get("R", 0))),
            int(d.get("cell_min", 0)),
            int(d.get("cell_max", 0)),
            Boundary(d.get("boundary", "open")),
            d.get("n_sites"),
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid lattice: {exc}") from None


@dataclass
class RunConfig:
    """One validated run."""

    mode: Mode
    lattice: LatticeSpec
    n_bosons: int
    raw: dict
    geometry: Optional[StripeGeometry] = None
    excitation: Optional[ExcitationSpec] = None
    output_dir: Optional[str] = None
    k_count: int = 41
    k_points: Optional[list] = None
    dt: float = 0.01
    t_end: float = 50.0
    sample_every: float = 0.1
    snapshot_times: list = field(default_factory=list)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict) or not d:
            raise ConfigError("missing field 'mode' (empty configuration)")
        try:
            mode = Mode(_require(d, "mode", ""))
        except ValueError:
            raise ConfigError(
                f"field 'mode' must be one of {[m.value for m in Mode]}, got {d['mode']!r}"
            ) from None
        lattice = parse_lattice(_require(d, "lattice", ""))
        n = int(_require(d, "n_bosons", ""))
        if n < 1:
            raise ConfigError("field 'n_bosons' must be at least 1")
        cfg = cls(mode, lattice, n, d, output_dir=d.get("output_dir"))
        cfg.k_count = int(d.get("k_count", 41))
        if d.get("k_points") is not None:
            cfg.k_points = [float(k) for k in d["k_points"]]
        if mode in (Mode.STRIPE, Mode.CLASSIFY):
            geo = _require(d, "geometry", "")
            try:
                cfg.geometry = StripeGeometry(
                    lattice,
                    n,
                    tuple(_require(geo, "translation", "geometry.")),
                    tuple(tuple(w) for w in geo.get("transverse", [])),
                )
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"invalid geometry: {exc}") from None
            if cfg.k_points is None and cfg.k_count < 2:
                raise ConfigError("field 'k_count' must be at least 2")
        if mode is Mode.BANDS and cfg.k_count < 2:
            raise ConfigError("field 'k_count' must be at least 2")
        if mode in (Mode.EVOLVE, Mode.ORACLE_CHECK):
            ex = _require(d, "excitation", "")
            try:
                cfg.excitation = ExcitationSpec.at_sites(
                    _require(ex, "sites", "excitation."),
                    delta_e=float(ex.get("delta_e", 0.0)),
                    t0=float(ex.get("t0", 10.0)),
                    tau2=float(ex.get("tau2", 10.0)),
                    eta0=float(ex.get("eta0", 1.0)),
                )
                cfg.excitation.check(lattice, n)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"invalid excitation: {exc}") from None
            cfg.dt = _positive(d.get("dt", 0.01), "dt")
            cfg.t_end = _positive(d.get("t_end", 50.0), "t_end")
            cfg.sample_every = _positive(d.get("sample_every", 0.1), "sample_every")
            cfg.snapshot_times = [float(t) for t in d.get("snapshot_times", [])]
        return cfg


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _k_grid(cfg: RunConfig) -> np.ndarray:
    if cfg.k_points is not None:
        return np.array(cfg.k_points)
    return np.linspace(-np.pi, np.pi, cfg.k_count)


def _run_bands(cfg: RunConfig, out: Path, threads) -> dict:
    if cfg.lattice.interaction.U != 0.0:
        raise ConfigError("bands mode needs U = 0 (interactions break the N-D translation symmetry)")
    pattern = cfg.lattice.pattern
    axis = np.linspace(-np.pi, np.pi, cfg.k_count)
    rows, worst = [], 0.0
    for k in np.ndindex(*(cfg.k_count,) * cfg.n_bosons):
        kv = axis[list(k)]
        energies, _ = eigensystem(synthetic_bloch_matrix(pattern, cfg.n_bosons, kv), vectors=False)
        if pattern.kind is CouplingKind.UNIFORM:
            ref = [analytic_band_tb(kv, pattern.g)]
        elif cfg.n_bosons == 2:
            ref = analytic_band_ssh2d(kv[0], kv[1], pattern.g1, pattern.g2)
        else:
            ref = None
        if ref is not None:
            worst = max(worst, float(np.max(np.abs(np.sort(ref) - energies))))
        for b, e in enumerate(energies):
            rows.append([*map(_fmt, kv), b, _fmt(e)])
    header = [f"k_{i + 1}" for i in range(cfg.n_bosons)] + ["band_index", "energy"]
    _write_csv(out / "bands.csv", header, rows)
    return {"analytic_max_deviation": worst}


def _band_rows(bands):
    return [
        [_fmt(k), b, _fmt(e)]
        for k, row in zip(bands.k_grid, bands.energies)
        for b, e in enumerate(row)
    ]


def _run_stripe(cfg: RunConfig, out: Path, threads) -> dict:
    geom = cfg.geometry
    bands = projected_bands(geom, cfg.k_count, k_grid=_k_grid(cfg), threads=threads)
    _write_csv(out / "bands.csv", ["k_j", "band_index", "energy"], _band_rows(bands))
    meta = {}
    pattern = cfg.lattice.pattern
    if (
        cfg.n_bosons == 2
        and pattern.kind is CouplingKind.ALTERNATING
        and geom.translation == (1, 0)
        and cfg.lattice.interaction.U == 0.0
    ):
        ref = ssh2d_bulk_reference(bands.k_grid, pattern.g1, pattern.g2)
        gap = detect_gap_modes(bands, ref)
        _write_csv(
            out / "gap_modes.csv",
            ["k_j", "band_index", "energy"],
            [[_fmt(bands.k_grid[i]), b, _fmt(bands.energies[i, b])] for i, b in gap],
        )
        meta["gap_modes"] = len(gap)
    return meta


def _run_classify(cfg: RunConfig, out: Path, threads) -> dict:
    geom = cfg.geometry
    bands = projected_bands(geom, cfg.k_count, keep_vectors=True, k_grid=_k_grid(cfg), threads=threads)
    _write_csv(out / "bands.csv", ["k_j", "band_index", "energy"], _band_rows(bands))
    parity_ok = geom.n_bosons == 2 and geom.is_diagonal and geom.symmetric_window
    rows, counts = [], {}
    for ik, k in enumerate(bands.k_grid):
        energies, vecs = bands.energies[ik], bands.eigvecs[ik]
        parities = None
        if parity_ok:
            vecs, parities = resolve_parities(energies, vecs, geom, float(k))
        for b, e in enumerate(energies):
            pair = EigenPair(float(e), vecs[:, b])
            if geom.n_bosons == 3:
                label = classify_band_by_region(pair, geom)
            else:
                label = classify_localization(pair, geom)
            par = parities[b].value if parities else "NA"
            counts[label.category.value] = counts.get(label.category.value, 0) + 1
            rows.append([_fmt(k), b, _fmt(e), label.category.value, par, _fmt(label.localization)])
    _write_csv(
        out / "modes.csv", ["k_j", "band", "energy", "category", "parity", "localization"], rows
    )
    return {"category_counts": dict(sorted(counts.items()))}


def _run_evolve(cfg: RunConfig, out: Path, threads) -> dict:
    op = build_synthetic_operator(cfg.lattice, cfg.n_bosons)
    source = SourceTerm(cfg.excitation)
    try:
        res = evolve(
            op,
            source,
            cfg.t_end,
            cfg.dt,
            sample_every=cfg.sample_every,
            snapshot_times=cfg.snapshot_times,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = [
        [_fmt(t), int(s), _fmt(nk)]
        for t, row in zip(res.times, res.boson_numbers)
        for s, nk in zip(res.sites, row)
    ]
    _write_csv(out / "evolution.csv", ["t", "site", "N_k"], rows)
    for t, f in res.snapshots:
        probs = excitation_probability_map(f)
        header = [f"lambda_{i + 1}" for i in range(cfg.n_bosons)] + ["probability"]
        _write_csv(
            out / f"snapshot_{_fmt(t)}.csv",
            header,
            [[*tup, _fmt(p)] for tup, p in probs.items()],
        )
    after = res.times >= source.off_time
    drift = None
    if after.sum() > 1:
        n_after = res.norms[after]
        span = res.times[after][-1] - res.times[after][0]
        drift = float((n_after.max() - n_after.min()) / n_after[-1] / span)
    return {
        "norm_before_normalization": res.final_norm,
        "norm_after_normalization": float(res.norms[-1] / res.scale),
        "post_source_norm_drift_per_time": drift,
        "exchange_symmetry_violation": res.symmetry_violation,
        "boson_number_sum_final": float(res.boson_numbers[-1].sum()),
    }


def _run_oracle(cfg: RunConfig, out: Path, threads) -> dict:
    op = build_synthetic_operator(cfg.lattice, cfg.n_bosons)
    fock = build_fock_hamiltonian(cfg.lattice, cfg.n_bosons)
    e_syn, _ = eigensystem(symmetric_sector_matrix(op), vectors=False)
    e_fock, _ = eigensystem(fock.matrix.toarray(), vectors=False)
    res = evolve(op, SourceTerm(cfg.excitation), cfg.t_end, cfg.dt, cfg.sample_every, normalize=False, keep_fields=True)
    traj = evolve_fock(fock, cfg.excitation, cfg.t_end, cfg.dt, cfg.sample_every)
    spec_dev = float(np.max(np.abs(e_syn - e_fock)))
    traj_dev = compare_trajectories(res.fields, res.times, cfg.n_bosons, traj)
    _write_csv(
        out / "oracle.csv",
        ["quantity", "value"],
        [["spectrum_max_deviation", _fmt(spec_dev)], ["trajectory_max_deviation", _fmt(traj_dev)]],
    )
    return {"spectrum_max_deviation": spec_dev, "trajectory_max_deviation": traj_dev}


RUNNERS = {
    Mode.BANDS: _run_bands,
    Mode.STRIPE: _run_stripe,
    Mode.CLASSIFY: _run_classify,
    Mode.EVOLVE: _run_evolve,
    Mode.ORACLE_CHECK: _run_oracle,
}


def run(config: dict, out_dir=None, threads: Optional[int] = None) -> Path:
    """Execute one configuration and write its artifacts; returns the output dir.

    Raises
    ------
    ConfigError
        On a missing or invalid field.
    ArithmeticError
        When an eigen-residual check fails.
    """
    cfg = RunConfig.from_dict(config)
    out = Path(out_dir or cfg.output_dir or "out")
    out.mkdir(parents=True, exist_ok=True)
    extra = RUNNERS[cfg.mode](cfg, out, threads)
    meta = {"config": config, "version": __version__, **extra}
    with open(out / "meta.json", "w", encoding="ascii") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads for k-sweeps")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="reserved; the pipeline is deterministic")
    parser = argparse.ArgumentParser(
        prog="synthlattice", description=__doc__.splitlines()[0], parents=[common]
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a JSON configuration file", parents=[common])
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_pre = sub.add_parser("preset", help="run a named preset", parents=[common])
    p_pre.add_argument("name")
    p_pre.add_argument("--out", default=None)
    sub.add_parser("list-presets", help="list the presets")
    args = parser.parse_args(argv)
    threads = getattr(args, "threads", None)

    if args.command == "list-presets":
        for name, desc in list_presets():
            print(f"{name}\t{desc}")
        return EXIT_OK
    try:
        if args.command == "run":
            try:
                with open(args.config, encoding="utf-8") as fh:
                    config = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config: {exc}") from None
            out = args.out
        else:
            try:
                config = get_preset(args.name)
            except KeyError as exc:
                raise ConfigError(str(exc.args[0])) from None
            out = args.out or f"out/{args.name}"
        path = run(config, out, threads=threads)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except ArithmeticError as exc:
        return _fail(EXIT_NUMERIC, "numerical", str(exc))
    print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
