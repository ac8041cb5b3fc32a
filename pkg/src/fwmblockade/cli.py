"""Command line entry point: sweep, single, verify."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from .analytics import classify
from .liouvillian import SolverError, SolverOptions
from .model import SystemParams
from .presets import PRESET_NAMES, figure_preset
from .sweep import ConfigError, OutputSpec, load_config, run_sweep, with_outputs

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_ACCEPTANCE = 0, 1, 2, 3


def _dims(text: str) -> tuple[int, int, int]:
    try:
        dims = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 5,5,5, got {text!r}") from None
    if len(dims) != 3:
        raise argparse.ArgumentTypeError(f"need three dims, got {text!r}")
    return dims


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fwmblockade", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a parameter sweep from a config file or a figure preset")
    src = sw.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="key-value config file")
    src.add_argument("--preset", help=f"figure preset: {', '.join(PRESET_NAMES)}")
    sw.add_argument("--out", help="output directory (CSV, JSON and SVG per curve)")
    sw.add_argument("--dims", type=_dims, help="truncation per mode, e.g. 5,5,5")
    sw.add_argument("--workers", type=int, help="worker processes")
    sw.add_argument("--no-svg", action="store_true", help="skip plots")

    one = sub.add_parser("single", help="evaluate one parameter point and print observables as JSON")
    for name in SystemParams.field_names():
        one.add_argument(f"--{name}", type=complex if name == "E" else float, default=None)
    one.add_argument("--dims", type=_dims, default=(5, 5, 5))
    one.add_argument("--method", default="auto", choices=("auto", "direct", "gmres"))

    ver = sub.add_parser("verify", help="run the acceptance criteria")
    ver.add_argument("--suite", default="acceptance", choices=("acceptance",))
    ver.add_argument("--dims", type=_dims, default=(5, 5, 5))
    ver.add_argument("--workers", type=int, default=1)
    ver.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    return ap


def _cmd_sweep(args) -> int:
    try:
        configs = [load_config(args.config)] if args.config else figure_preset(args.preset)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    from .io import write_outputs

    any_failed_all = False
    for cfg in configs:
        if args.dims:
            cfg = replace(cfg, dims=args.dims)
        if args.out:
            cfg = with_outputs(cfg, args.out, svg=not args.no_svg)
        elif args.no_svg:
            cfg = replace(cfg, outputs=replace(cfg.outputs, svg=None))
        if cfg.outputs == OutputSpec():
            cfg = with_outputs(cfg, ".", svg=not args.no_svg)
        result = run_sweep(cfg, args.workers)
        try:
            paths = write_outputs(result, cfg)
        except OSError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"{cfg.name}: {result.n_converged}/{len(result.points)} points converged "
              f"in {result.metadata['wall_time_s']:.1f}s -> {', '.join(map(str, paths))}")
        if result.n_converged == 0:
            any_failed_all = True
    return EXIT_SOLVER if any_failed_all else EXIT_OK


def _cmd_single(args) -> int:
    values = {k: getattr(args, k) for k in SystemParams.field_names() if getattr(args, k) is not None}
    try:
        params = SystemParams(**values)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    from . import solve

    try:
        _, obs = solve(params, args.dims, SolverOptions(method=args.method))
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    out = {"params": params.to_dict(), "dims": list(args.dims), "observables": obs.to_dict(),
           "verdict": classify(obs, params).to_dict()}
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .acceptance import AcceptanceRun

    run = AcceptanceRun(args.dims, args.workers)
    numbers = args.only or sorted(run.TITLES)
    results = []
    for n in numbers:
        r = run.run(n)
        print(r.line(), flush=True)
        results.append(r)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {', '.join(map(str, failed))}" if failed else ""))
    return EXIT_ACCEPTANCE if failed else EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return {"sweep": _cmd_sweep, "single": _cmd_single, "verify": _cmd_verify}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
