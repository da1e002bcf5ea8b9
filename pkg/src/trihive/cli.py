"""Command-line front end: sampling, spectra, volumes, witnesses, honeycombs,
Littlewood-Richardson counts, and the concentration sweep.

Exit codes: 0 success, 1 usage problems, 2 numerical or domain failures.
Every randomized subcommand requires an explicit --seed; outputs carry a
versioned schema string.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .errors import TrihiveError
from .hive import HiveBoundary, count_hives
from .honeycomb import build_honeycomb, emit_svg, reference_honeycomb, to_json
from .polytope import (MEAN_ZERO, build_constraints, diameter_witness,
                       membership)
from .sampling import SamplerConfig, batch_to_csv, sample_uniform
from .spectral import dft, dominant_mode, norm, spectrum_to_csv
from .volume import MCVolumeConfig, volume_report

WITNESS_SCHEMA = "trihive.witness.v1"
LR_SCHEMA = "trihive.lr.v1"
SPECTRUM_JSON_SCHEMA = "trihive.spectrum.v1"
CONCENTRATION_SCHEMA = "trihive.concentration.v1"

KNOWN_STATISTICS = ("linf_over_n2", "l2_over_n3", "sobolev",
                    "dominant_mode_mass")


def _triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a,b,c got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


@dataclass(frozen=True)
class ExperimentConfig:
    """Concentration-sweep settings; file keys mirror the field names."""

    n_list: tuple
    s: tuple = (2.0, 2.0, 2.0)
    samples: int = 200
    seed: int = 0
    out_dir: str | None = None
    statistics: tuple = KNOWN_STATISTICS
    burn_in_factor: float = 20.0
    thinning_factor: float = 1.0

    def __post_init__(self):
        if not self.n_list or list(self.n_list) != sorted(set(self.n_list)):
            raise TrihiveError("n_list must be nonempty and ascending")
        if self.samples < 1:
            raise TrihiveError("samples must be at least 1")
        for stat in self.statistics:
            if stat not in KNOWN_STATISTICS:
                raise TrihiveError(f"unknown statistic {stat!r}")


def _mode_mass(g: np.ndarray) -> float:
    """Fraction of the squared l2 mass carried by the dominant mode pair."""
    sp = dft(g)
    k0, l0, theta = dominant_mode(g)
    n = sp.n
    pair = abs(theta) ** 2
    if ((-k0) % n, (-l0) % n) != (k0, l0):
        pair += abs(sp.coefficient(-k0, -l0)) ** 2
    total = float(np.sum(np.abs(sp.theta) ** 2))
    return pair / total if total > 0 else 0.0


def run_concentration(cfg: ExperimentConfig) -> str:
    """One CSV row per grid side; deterministic given the seed.

    Wall-clock time goes to stderr so reruns produce identical files.
    """
    columns = ["n", "samples"]
    for stat in cfg.statistics:
        if stat == "linf_over_n2":
            columns += ["linf_over_n2_median", "linf_over_n2_q90"]
        elif stat == "l2_over_n3":
            columns.append("l2_over_n3_mean")
        elif stat == "sobolev":
            columns.append("sobolev_over_n_mean")
        elif stat == "dominant_mode_mass":
            columns.append("dominant_mode_mass_mean")
    lines = [f"# schema={CONCENTRATION_SCHEMA}", ",".join(columns)]
    start = time.perf_counter()
    for n in cfg.n_list:
        sys_n = build_constraints(n, cfg.s, MEAN_ZERO)
        scfg = SamplerConfig(master_seed=cfg.seed,
                             burn_in=int(cfg.burn_in_factor * n ** 4),
                             thinning=max(1, int(cfg.thinning_factor * n * n)))
        batch = sample_uniform(sys_n, scfg, cfg.samples)
        values = batch.values
        row = [str(n), str(cfg.samples)]
        nsq = float(n * n)
        for stat in cfg.statistics:
            if stat == "linf_over_n2":
                per = np.array([norm(g, "linf") for g in values]) / nsq
                row.append(f"{float(np.median(per)):.12g}")
                row.append(f"{float(np.quantile(per, 0.9)):.12g}")
            elif stat == "l2_over_n3":
                per = np.array([norm(g, "lp", p=2) for g in values]) / n ** 3
                row.append(f"{float(per.mean()):.12g}")
            elif stat == "sobolev":
                per = np.array([norm(g, "sobolev", p=2) for g in values]) / n
                row.append(f"{float(per.mean()):.12g}")
            elif stat == "dominant_mode_mass":
                per = np.array([_mode_mass(g) for g in values])
                row.append(f"{float(per.mean()):.12g}")
        lines.append(",".join(row))
    print(f"# wall_time_s={time.perf_counter() - start:.3f}", file=sys.stderr)
    return "\n".join(lines) + "\n"


def _parse_config_file(path: str) -> dict:
    raw = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise TrihiveError(f"config line without '=': {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            raw[key] = value
    return raw


def _experiment_config(args) -> ExperimentConfig:
    raw = _parse_config_file(args.config) if args.config else {}
    n_list = args.n_list or (_int_list(raw["n_list"]) if "n_list" in raw else None)
    if n_list is None:
        raise TrihiveError("concentrate needs n_list (flag or config)")
    s = args.s or (_triple(raw["s"]) if "s" in raw else (2.0, 2.0, 2.0))
    seed = args.seed if args.seed is not None else (
        int(raw["seed"]) if "seed" in raw else None)
    if seed is None:
        raise TrihiveError("concentrate needs an explicit seed")
    samples = args.samples or int(raw.get("samples", 200))
    stats = (tuple(args.stats.split(",")) if args.stats
             else tuple(raw["stats"].split(",")) if "stats" in raw
             else KNOWN_STATISTICS)
    return ExperimentConfig(
        n_list=tuple(n_list), s=tuple(s), samples=samples, seed=seed,
        out_dir=args.out or raw.get("out"),
        statistics=stats,
        burn_in_factor=(args.burn_in_factor if args.burn_in_factor is not None
                        else float(raw.get("burn_in_factor", 20.0))),
        thinning_factor=(args.thin_factor if args.thin_factor is not None
                         else float(raw.get("thinning_factor", 1.0))))


def _sampler_config(args) -> SamplerConfig:
    return SamplerConfig(master_seed=args.seed,
                         burn_in=args.burn_in,
                         thinning=args.thin)


def _write(text: str, args, filename: str) -> None:
    if getattr(args, "out", None):
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, filename), "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_sample(args) -> int:
    sys_n = build_constraints(args.n, args.s, MEAN_ZERO)
    batch = sample_uniform(sys_n, _sampler_config(args), args.samples)
    _write(batch_to_csv(batch), args, f"samples_n{args.n}.csv")
    return 0


def _cmd_spectrum(args) -> int:
    sys_n = build_constraints(args.n, args.s, MEAN_ZERO)
    batch = sample_uniform(sys_n, _sampler_config(args), 1)
    g = batch.values[0]
    if args.json:
        k0, l0, theta = dominant_mode(g)
        payload = {"schema": SPECTRUM_JSON_SCHEMA, "n": args.n,
                   "s": list(args.s), "seed": args.seed,
                   "dominant_mode": [k0, l0],
                   "coefficient": [theta.real, theta.imag],
                   "mode_mass": _mode_mass(g)}
        _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args,
               f"spectrum_n{args.n}.json")
    else:
        _write(spectrum_to_csv(dft(g)), args, f"spectrum_n{args.n}.csv")
    return 0


def _cmd_volume(args) -> int:
    method = args.method
    if method == "auto":
        method = "exact" if args.n == 2 else "mc"
    if method == "exact" and args.n != 2:
        raise TrihiveError("exact volume is only available at n = 2")
    cfg = None
    if method == "mc" or args.n != 2:
        if args.seed is None:
            raise TrihiveError("Monte Carlo volume needs --seed")
        cfg = MCVolumeConfig(seed=args.seed,
                             samples_per_level=args.samples or 3000)
    report = volume_report(args.n, args.s, cfg)
    _write(json.dumps(report, indent=2, sort_keys=True) + "\n", args,
           f"volume_n{args.n}.json")
    return 0


def _cmd_witness(args) -> int:
    sys_n = build_constraints(args.n, args.s, MEAN_ZERO)
    w = diameter_witness(args.n, args.s)
    inside, violation = membership(sys_n, w)
    s1, s2 = args.s[1], args.s[2]
    payload = {"schema": WITNESS_SCHEMA, "n": args.n, "s": list(args.s),
               "linf": norm(w, "linf"),
               "bound": (s1 + s2) * (args.n // 2) ** 2 / 4.0,
               "member": bool(inside), "violation": violation}
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args,
           f"witness_n{args.n}.json")
    return 0


def _cmd_honeycomb(args) -> int:
    if args.seed is not None:
        sys_n = build_constraints(args.n, args.s, MEAN_ZERO)
        g = sample_uniform(sys_n, _sampler_config(args), 1).values[0]
        diagram = build_honeycomb(g, args.s)
    else:
        diagram = reference_honeycomb(args.n, args.s)
    if args.svg:
        emit_svg(diagram, args.svg)
    if args.json or not args.svg:
        _write(to_json(diagram) + "\n", args, f"honeycomb_n{args.n}.json")
    return 0


def _cmd_lr(args) -> int:
    boundary = HiveBoundary(args.lam, args.mu, args.nu)
    count = count_hives(boundary)
    if args.json:
        payload = {"schema": LR_SCHEMA, "lam": list(boundary.lam),
                   "mu": list(boundary.mu), "nu": list(boundary.nu),
                   "count": count}
        _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args,
               "lr.json")
    else:
        print(count)
    return 0


def _cmd_concentrate(args) -> int:
    cfg = _experiment_config(args)
    text = run_concentration(cfg)
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        with open(os.path.join(cfg.out_dir, "concentration.csv"), "w",
                  encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trihive",
        description="Bounded-Hessian torus polytopes: sampling, volumes, "
                    "spectra, honeycombs, and hive counting.")
    sub = parser.add_subparsers(dest="command")

    def common(p, seed_required=True):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--s", type=_triple, default=(2.0, 2.0, 2.0))
        p.add_argument("--seed", type=int, required=seed_required)
        p.add_argument("--burn-in", type=int, default=None)
        p.add_argument("--thin", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")

    p = sub.add_parser("sample", help="draw uniform fields, CSV out")
    common(p)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("spectrum", help="spectrum of one sampled field")
    common(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("volume", help="volume report (exact n=2, MC else)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=_triple, default=(2.0, 2.0, 2.0))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None,
                   help="Monte Carlo samples per annealing level")
    p.add_argument("--method", choices=("auto", "exact", "mc"), default="auto")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_volume)

    p = sub.add_parser("witness", help="diameter witness report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=_triple, default=(2.0, 2.0, 2.0))
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("honeycomb", help="honeycomb diagram (SVG/JSON)")
    common(p, seed_required=False)
    p.add_argument("--svg", default=None, help="SVG output path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_honeycomb)

    p = sub.add_parser("lr", help="Littlewood-Richardson coefficient")
    p.add_argument("--lam", type=_int_list, required=True)
    p.add_argument("--mu", type=_int_list, required=True)
    p.add_argument("--nu", type=_int_list, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_lr)

    p = sub.add_parser("concentrate", help="norm-decay sweep over n")
    p.add_argument("--config", default=None, help="flat key=value file")
    p.add_argument("--n-list", type=_int_list, default=None)
    p.add_argument("--s", type=_triple, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--stats", default=None,
                   help=f"comma list from {','.join(KNOWN_STATISTICS)}")
    p.add_argument("--burn-in-factor", type=float, default=None)
    p.add_argument("--thin-factor", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_concentrate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if not getattr(args, "command", None):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except TrihiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
