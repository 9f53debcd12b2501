"""Command-line front end.

Exit codes: 0 on success, 1 when a campaign or internal property check
fails, 2 on bad input (the diagnostic names the violated invariant).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import harness, statedoc
from .errors import (
    CampaignFailed,
    DomainError,
    ExhaustedRejection,
    InvalidFunctionalForScenario,
    NotXState,
    SettingConstraintViolated,
    SpectrumNotReal,
    StateValidationError,
    TightnessViolation,
    Unphysical,
)
from .measures import analyze as analyze_state
from .optimize import FUNCTIONALS, OptimizerConfig, maximize
from .sampling import KINDS, SamplerSpec, sample_state
from .states import bell_state, fano_decompose, werner_state

_INPUT_ERRORS = (
    StateValidationError,
    NotXState,
    Unphysical,
    DomainError,
    SettingConstraintViolated,
    InvalidFunctionalForScenario,
    ExhaustedRejection,
    ValueError,
    OSError,
    json.JSONDecodeError,
)
_PROPERTY_ERRORS = (CampaignFailed, TightnessViolation, SpectrumNotReal)

_MEASURE_FIELDS = ("f2", "f3", "s2", "s3", "n2", "m_horodecki", "b_max", "concurrence", "purity")


def _default_seed() -> int:
    return int(os.environ.get("STEERKIT_SEED", "0"))


def _default_threads() -> int:
    return os.cpu_count() or 1


def _add_state_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", metavar="FILE", help="state document (JSON)")
    group.add_argument("--werner", type=float, metavar="W", help="Werner state with parameter W")
    group.add_argument("--bell", choices=("phi+", "phi-", "psi+", "psi-"), help="Bell state")


def _load_state(args):
    if args.input is not None:
        return statedoc.load_state_file(args.input)
    if args.werner is not None:
        return werner_state(args.werner)
    return bell_state(args.bell)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steerkit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="closed-form measures of one state")
    _add_state_source(sp)
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("werner", help="closed-form Werner scan as CSV")
    sp.add_argument("--from", dest="w_from", type=float, default=0.0)
    sp.add_argument("--to", dest="w_to", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("sample", help="draw random states (JSON lines)")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--rank", type=int, default=4)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify-tightness", help="bound checks over random settings")
    sp.add_argument("--states", type=int, default=10000)
    sp.add_argument("--settings", type=int, default=100)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--restarts", type=int, default=32)
    sp.add_argument("--certify-states", type=int, default=100)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify-hierarchy", help="entanglement-steering-nonlocality hierarchy")
    sp.add_argument("--states", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--kind", choices=KINDS, default="ginibre_mixed")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify-3322", help="I3322 envelope on a Werner grid")
    sp.add_argument("--grid", type=int, default=21, help="number of grid points in [0, 1]")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--restarts", type=int, default=32)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("optimize", help="maximize one functional over settings")
    sp.add_argument("--functional", choices=FUNCTIONALS, required=True)
    _add_state_source(sp)
    sp.add_argument("--restarts", type=int, default=32)
    sp.add_argument("--seed", type=int, default=None)

    return p


def _cmd_analyze(args) -> int:
    report = analyze_state(_load_state(args))
    if args.format == "json":
        _emit(json.dumps(report.to_dict()), None)
    else:
        d = report.to_dict()
        _emit(",".join(_MEASURE_FIELDS) + "\n" + ",".join(repr(d[k]) for k in _MEASURE_FIELDS), None)
    return 0


def _cmd_werner(args) -> int:
    reports = harness.werner_scan(args.w_from, args.w_to, args.steps)
    _emit(harness.werner_scan_csv(reports), args.out)
    return 0


def _cmd_sample(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    spec = SamplerSpec(kind=args.kind, seed=seed, count=args.count, rank=args.rank)
    lines = []
    for i in range(args.count):
        doc = statedoc.state_to_document(sample_state(spec, i))
        lines.append(json.dumps(doc))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_verify_tightness(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    threads = args.threads if args.threads is not None else _default_threads()
    cfg = OptimizerConfig(restarts=args.restarts, seed=seed)
    report = harness.tightness_campaign(
        args.states,
        args.settings,
        cfg,
        certify_states=args.certify_states,
        threads=threads,
    )
    _emit(report.to_json(), args.out)
    return 0


def _cmd_verify_hierarchy(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    threads = args.threads if args.threads is not None else _default_threads()
    report = harness.hierarchy_campaign(args.states, seed, kind=args.kind, threads=threads)
    _emit(report.to_json(), args.out)
    return 0


def _cmd_verify_3322(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    threads = args.threads if args.threads is not None else _default_threads()
    if args.grid < 1:
        raise DomainError(f"--grid must be >= 1, got {args.grid}")
    cfg = OptimizerConfig(restarts=args.restarts, seed=seed)
    grid = np.linspace(0.0, 1.0, args.grid) if args.grid > 1 else np.array([0.0])
    report = harness.i3322_envelope_campaign(grid, cfg, threads=threads)
    _emit(report.to_json(), args.out)
    return 0


def _cmd_optimize(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = OptimizerConfig(restarts=args.restarts, seed=seed)
    fano = fano_decompose(_load_state(args))
    result = maximize(args.functional, fano, cfg)
    _emit(json.dumps(result.to_dict()), None)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "werner": _cmd_werner,
    "sample": _cmd_sample,
    "verify-tightness": _cmd_verify_tightness,
    "verify-hierarchy": _cmd_verify_hierarchy,
    "verify-3322": _cmd_verify_3322,
    "optimize": _cmd_optimize,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _PROPERTY_ERRORS as exc:
        print(f"FAIL {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except _INPUT_ERRORS as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
