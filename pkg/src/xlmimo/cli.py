"""Command-line entry point: ``xlmimo {fig4,fig5,custom,regions,precode-bench}``."""
from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from . import scenario
from .em import classify_region, fresnel_distance, rayleigh_distance
from .errors import XLMimoError
from .precoding import spectral_radius_estimate, zf_exact, zf_neumann, zf_residual


def _load_config(args, kind: str) -> scenario.ScenarioConfig:
    if args.config:
        cfg = scenario.ScenarioConfig.from_json(args.config)
        if cfg.kind != kind:
            raise scenario.ConfigError(f"config kind {cfg.kind!r} does not match subcommand {kind!r}")
    else:
        cfg = scenario.ScenarioConfig(kind=kind) if kind != "custom" else None
        if cfg is None:
            raise scenario.ConfigError("custom runs need --config")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.format is not None:
        cfg.output_format = args.format
    cfg.validate()
    return cfg


def _write(text: str, out: str | None) -> None:
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write results to {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    cfg = _load_config(args, args.command)
    rows = scenario.run(cfg, threads=args.threads)
    _write(scenario.render(rows, cfg.output_format), args.out)
    for r in rows:
        if r.capacity_bits is not None:
            logging.info("capacity %.6f bit/channel use", r.capacity_bits)
    return 0


def cmd_regions(args) -> int:
    d = args.aperture
    lines = [f"aperture {d:.6g}  fresnel boundary {fresnel_distance(d):.6g}  "
             f"rayleigh distance {rayleigh_distance(d):.6g}"]
    for dist in args.distance:
        lines.append(f"{dist:.6g}\t{classify_region(d, dist).value}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_precode_bench(args) -> int:
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    k, n = args.users, args.antennas
    h = (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))) / math.sqrt(2)
    exact = zf_exact(h)
    rho = spectral_radius_estimate(h @ h.conj().T)
    lines = [f"users {k} antennas {n} spectral radius {rho:.6f}",
             f"exact\tresidual {zf_residual(h, exact):.3e}",
             "order\tresidual\terror_vs_exact"]
    for order in range(args.max_order + 1):
        p = zf_neumann(h, order)
        err = np.linalg.norm(p.weights - exact.weights)
        lines.append(f"{order}\t{zf_residual(h, p):.6e}\t{err:.6e}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario config")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=1, help="parallel sweep points")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="xlmimo", description="Near-field XL-MIMO channel and EDoF experiments")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("fig4", "EDoF of tilted surface pairs against N"),
                           ("fig5", "EDoF with one or two on-axis users against d1"),
                           ("custom", "single channel from a config")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.set_defaults(func=cmd_sweep)
    s = sub.add_parser("regions", parents=[common], help="classify field regions")
    s.add_argument("--aperture", type=float, default=10 * math.sqrt(2))
    s.add_argument("--distance", type=float, nargs="+", default=[7.0])
    s.set_defaults(func=cmd_regions)
    s = sub.add_parser("precode-bench", parents=[common], help="Neumann vs exact ZF residuals")
    s.add_argument("--users", type=int, default=8)
    s.add_argument("--antennas", type=int, default=256)
    s.add_argument("--max-order", type=int, default=6)
    s.set_defaults(func=cmd_precode_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (XLMimoError, OSError) as exc:
        print(f"xlmimo {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
