"""``shadowperc`` command line.

Every command is a pure function of its configuration and input files.
Exit codes: 0 success, 1 a check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, formats, oracles
from .alpha import AlphaField, Side, compute_alpha, level_set
from .clusters import CSV_COLUMNS, Adjacency, Axis, scan_levels
from .distributions import DistributionSpec, gaussian, mean
from .field import CapacityError, HeightField, generate
from .reconstruct import psi, psi0


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    spec: DistributionSpec = field(default_factory=gaussian)
    W: int = 64
    H: int = 64
    L: int = 64
    levels: list = field(default_factory=lambda: [0.5])
    side: str = "le"
    adjacency: str = "orth"
    axis: str = "horizontal"
    samples: int = 20
    seed: int = 0
    threads: int = 1
    mean_mode: str = "empirical"
    out: str | None = None

    def validate(self):
        if not self.levels:
            raise UsageError("at least one --level is required")
        self.levels = [float(x) for x in self.levels]
        if any(b < a for a, b in zip(self.levels, self.levels[1:])):
            raise UsageError("levels must be sorted ascending")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        for name in ("W", "H", "L"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        try:
            Side.parse(self.side)
            Adjacency.parse(self.adjacency)
            Axis.parse(self.axis)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.mean_mode not in ("empirical", "known"):
            raise UsageError("--mean-mode must be empirical or known")
        return self

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["spec"] = self.spec.to_dict()
        return d


_OVERRIDES = ("W", "H", "L", "levels", "side", "adjacency", "axis", "samples", "seed", "threads",
              "mean_mode", "out")


def resolve_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if getattr(args, "config", None):
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        for key, value in raw.items():
            if key == "spec":
                cfg.spec = DistributionSpec.from_dict(value)
            elif key == "level":
                cfg.levels = list(value) if isinstance(value, list) else [value]
            elif key in _OVERRIDES:
                setattr(cfg, key, value)
            else:
                raise UsageError(f"unknown config key {key!r}")
    if getattr(args, "spec", None):
        cfg.spec = DistributionSpec.from_json(args.spec)
    for key in _OVERRIDES:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    return cfg.validate()


def _emit_text(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands

def cmd_generate(cfg: ExperimentConfig, args) -> int:
    if not cfg.out:
        raise UsageError("generate needs --out")
    f = generate(cfg.W, cfg.H, cfg.L, cfg.spec, cfg.seed, threads=cfg.threads)
    formats.write_bytes(cfg.out, formats.field_bytes(f))
    if args.csv:
        Path(args.csv).write_text(formats.field_csv(f))
    return 0


def _load_field(path) -> HeightField:
    obj = formats.load(path)
    if not isinstance(obj, HeightField):
        raise formats.FormatError(f"{path} is not a height field dump")
    return obj


def cmd_alpha(cfg: ExperimentConfig, args) -> int:
    if not cfg.out:
        raise UsageError("alpha needs --out")
    f = _load_field(args.input)
    af = compute_alpha(f, args.truncation, threads=cfg.threads)
    formats.write_bytes(cfg.out, formats.alpha_bytes(af))
    if args.pbm:
        Path(args.pbm).write_bytes(formats.pbm_bytes(level_set(af, cfg.levels[0], cfg.side).bits))
    return 0


def cmd_render(cfg: ExperimentConfig, args) -> int:
    if not cfg.out:
        raise UsageError("render needs --out")
    obj = formats.load(args.input)
    af = obj if isinstance(obj, AlphaField) else compute_alpha(obj, threads=cfg.threads)
    img = formats.shadow_image(af, cfg.levels[0], cfg.adjacency)
    formats.write_bytes(cfg.out, formats.ppm_bytes(img))
    return 0


def scan_csv(estimates) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for e in estimates:
        d = e.to_dict()
        w.writerow([repr(d[c]) if isinstance(d[c], float) else d[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def cmd_scan(cfg: ExperimentConfig, args) -> int:
    est = scan_levels(cfg.spec, cfg.W, cfg.H, cfg.L, cfg.levels, cfg.side, cfg.axis, cfg.samples,
                      cfg.seed, cfg.adjacency, cfg.threads)
    _emit_text(scan_csv(est), cfg.out)
    if cfg.out:
        Path(cfg.out + ".config.json").write_text(_json(cfg.to_dict()))
    return 0


def cmd_verify_bounds(cfg: ExperimentConfig, args) -> int:
    checks = analysis.bound_suite(args.bound_samples, seed=cfg.seed)
    report = {"config": cfg.to_dict(), "checks": checks, "all_pass": all(c["pass"] for c in checks)}
    _emit_text(_json(report), cfg.out)
    return 0 if report["all_pass"] else 1


def cmd_selftest(cfg: ExperimentConfig, args) -> int:
    reports = [r.to_dict() for r in oracles.selftest(seed=cfg.seed, scale=args.scale)]
    ok = all(r["passed"] for r in reports)
    _emit_text(_json({"config": cfg.to_dict(), "reports": reports, "all_pass": ok}), cfg.out)
    return 0 if ok else 1


def cmd_reconstruct(cfg: ExperimentConfig, args) -> int:
    if not cfg.out:
        raise UsageError("reconstruct needs --out")
    obj = formats.load(args.input)
    heights = None
    if isinstance(obj, HeightField):
        heights = obj
        af = compute_alpha(obj, threads=cfg.threads)
    elif isinstance(obj, AlphaField):
        af = obj
    else:
        raise formats.FormatError(f"{args.input} holds neither heights nor slopes")
    spec = af.source_spec
    base = psi0(af)
    result = psi(base, cfg.mean_mode, mean(spec) if cfg.mean_mode == "known" else None)
    formats.write_bytes(cfg.out, formats.recon_bytes(result.values, af.source_lookahead,
                                                     af.source_seed, spec))
    side = result.sidecar()
    side["config"] = cfg.to_dict()
    side["input"] = str(args.input)
    if heights is not None:
        errs = []
        for j in range(af.rows):
            hi = int(base.hi[j])
            if hi:
                x = heights.heights[j, :hi]
                errs.append(float(np.max(np.abs(base.values[j, :hi] - (x - x[0])))))
            else:
                errs.append(None)
        side["anchor_roundtrip_max_abs_error"] = errs
    Path(cfg.out + ".json").write_text(_json(side))
    return 0


# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="JSON experiment config")
    p.add_argument("--spec", metavar="JSON", help='height law, e.g. \'{"kind":"gaussian","mean":0,"sd":1}\'')
    p.add_argument("--seed", type=int, metavar="U64")
    p.add_argument("--level", dest="levels", type=float, nargs="+", metavar="F64")
    p.add_argument("--side", choices=["le", "ge", "lt", "gt"])
    p.add_argument("--adjacency", choices=["orth", "star"])
    p.add_argument("--axis", choices=["horizontal", "vertical"])
    p.add_argument("--samples", type=int, metavar="N")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--threads", type=int, metavar="N")
    p.add_argument("--width", "-W", dest="W", type=int)
    p.add_argument("--rows", "-H", dest="H", type=int)
    p.add_argument("--lookahead", "-L", dest="L", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shadowperc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a seeded height field (SHPF)")
    _common(p)
    p.add_argument("--csv", metavar="PATH", help="also export heights as CSV")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("alpha", help="compute the slope field of a height dump (SHAF)")
    _common(p)
    p.add_argument("input")
    p.add_argument("--truncation", type=int)
    p.add_argument("--pbm", metavar="PATH", help="also export the level set at the first --level as PBM")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("render", help="PPM picture of lit/shadow cells at a level")
    _common(p)
    p.add_argument("input")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("scan", help="crossing probability vs level (CSV)")
    _common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify-bounds", help="Monte Carlo checks of the closed-form probabilities")
    _common(p)
    p.add_argument("--bound-samples", type=int, metavar="N",
                   help="override every check's sample size (defaults are the full sizes)")
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("selftest", help="compare fast kernels with brute-force oracles")
    _common(p)
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("reconstruct", help="recover heights from slopes (SHRC + JSON sidecar)")
    _common(p)
    p.add_argument("input")
    p.add_argument("--mean-mode", dest="mean_mode", choices=["empirical", "known"])
    p.set_defaults(func=cmd_reconstruct)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(cfg, args)
    except (UsageError, CapacityError, ValueError) as exc:
        print(f"shadowperc: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"shadowperc: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
