"""Command-line front end.

Batch commands only; identical argv and seed produce byte-identical output.
Exit codes: 0 success / all checks passed, 1 verification failure, 2 usage
error, 3 resource limit.  FRACDIM_THREADS optionally caps mesh workers
(0 = one per CPU; unset = serial).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    DomainError,
    Interval,
    ResourceError,
    SetDescriptor,
    format_rational,
    parse_rational,
    parse_set_spec,
)
from .expansions import expand
from .constructions import egy_approximate, egy_cover, engel_approximate
from .boxcount import Grid, dim_estimate, mesh_count
from .verify import DEFAULT_MAX_DENOM, DEFAULT_SEED, SUITES, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    """Validated invocation: one batch command and its inputs."""

    command: str
    set_spec: Optional[SetDescriptor] = None
    scales: Optional[tuple[int, int]] = None
    seed: int = DEFAULT_SEED          # fixed default keeps runs reproducible
    output: str = "-"
    format: str = "text"
    kind: Optional[str] = None
    x: Optional[Fraction] = None
    m: Optional[int] = None
    n: Optional[int] = None
    scale_log2: Optional[int] = None
    domain: Optional[Interval] = None
    csv_path: Optional[str] = None
    plot_path: Optional[str] = None
    suite: Optional[str] = None
    max_denom: int = DEFAULT_MAX_DENOM


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _set_arg(text: str) -> SetDescriptor:
    try:
        return parse_set_spec(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _ladder_arg(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected J1..J2, got {text!r}")
    try:
        j_lo, j_hi = int(lo), int(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"malformed ladder {text!r}") from exc
    if j_lo < 1 or j_lo >= j_hi:
        raise argparse.ArgumentTypeError(
            f"ladder needs 1 <= J1 < J2, got {text!r}")
    return j_lo, j_hi


def _domain_arg(text: str) -> Interval:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    try:
        return Interval(parse_rational(lo), parse_rational(hi))
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracdim",
        description="Exact expansions of rationals and box-counting "
                    "dimension estimation for expansion-length sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a rational and round-trip it")
    p.add_argument("--kind", required=True, choices=("cf", "egy", "engel"))
    p.add_argument("--x", required=True, type=_rational_arg, metavar="P/Q")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("approx", help="length-m approximation with proven bound")
    p.add_argument("--kind", required=True, choices=("egy", "engel"))
    p.add_argument("--x", required=True, type=_rational_arg, metavar="P/Q")
    p.add_argument("--m", required=True, type=_positive_int)
    p.add_argument("--n", required=True, type=_positive_int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("cover-egf",
                       help="emit the interval cover of the m-fold unit-fraction sumset")
    p.add_argument("--m", required=True, type=_positive_int)
    p.add_argument("--n", required=True, type=_positive_int)
    p.add_argument("--csv", metavar="PATH")

    p = sub.add_parser("mesh", help="occupied-cell count at one scale")
    p.add_argument("--set", required=True, type=_set_arg, metavar="SPEC",
                   help="cf:M | egy:M | egy-leq:M | engel:M | engel-leq:M "
                        "| sumset:M[:alpha=P/Q]")
    p.add_argument("--log2-scale", required=True, type=_positive_int, metavar="J")
    p.add_argument("--domain", type=_domain_arg, metavar="LO..HI")

    p = sub.add_parser("dim", help="slope of log2(cells) over a scale ladder")
    p.add_argument("--set", required=True, type=_set_arg, metavar="SPEC")
    p.add_argument("--log2-scales", required=True, type=_ladder_arg, metavar="J1..J2")
    p.add_argument("--csv", metavar="PATH", help="also write per-scale rows")
    p.add_argument("--plot", metavar="PATH",
                   help="also render the log-log figure to a file")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--max-denom", type=_positive_int, default=DEFAULT_MAX_DENOM)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Parse and validate argv into a RunConfig; usage errors exit with 2."""
    ns = build_parser().parse_args(list(argv))
    cfg = RunConfig(command=ns.command)
    if ns.command == "expand":
        cfg.kind, cfg.x = ns.kind, ns.x
        cfg.format = "json" if ns.json else "text"
    elif ns.command == "approx":
        cfg.kind, cfg.x, cfg.m, cfg.n = ns.kind, ns.x, ns.m, ns.n
        cfg.format = "json" if ns.json else "text"
    elif ns.command == "cover-egf":
        cfg.m, cfg.n, cfg.csv_path = ns.m, ns.n, ns.csv
        cfg.format = "csv"
    elif ns.command == "mesh":
        cfg.set_spec, cfg.scale_log2, cfg.domain = ns.set, ns.log2_scale, ns.domain
        cfg.format = "csv"
    elif ns.command == "dim":
        cfg.set_spec, cfg.scales = ns.set, ns.log2_scales
        cfg.csv_path, cfg.plot_path = ns.csv, ns.plot
        cfg.format = "json"
    elif ns.command == "verify":
        cfg.suite, cfg.max_denom, cfg.seed = ns.suite, ns.max_denom, ns.seed
    return cfg


# ---------------------------------------------------------------------------
# Command bodies
# ---------------------------------------------------------------------------

def _run_expand(cfg: RunConfig, out) -> int:
    e = expand(cfg.kind, cfg.x)
    if cfg.format == "json":
        out.write(json.dumps({
            "kind": cfg.kind,
            "x": format_rational(cfg.x),
            "digits": list(e.word.digits),
            "length": e.length,
        }) + "\n")
    else:
        out.write(f"{e.word} length={e.length} value={format_rational(e.value)}\n")
    return EXIT_OK


def _run_approx(cfg: RunConfig, out) -> int:
    if cfg.kind == "egy":
        word, y = egy_approximate(cfg.x, cfg.n, cfg.m)
        bound = Fraction(1, cfg.n ** (2 ** cfg.m))
    else:
        word, y = engel_approximate(cfg.x, cfg.n, cfg.m)
        bound = Fraction(1, cfg.n ** (cfg.m + 1))
    err = abs(cfg.x - y)
    ok = err <= bound
    if cfg.format == "json":
        out.write(json.dumps({
            "kind": cfg.kind,
            "x": format_rational(cfg.x),
            "m": cfg.m,
            "n": cfg.n,
            "digits": list(word.digits),
            "y": format_rational(y),
            "abs_err": format_rational(err),
            "bound": format_rational(bound),
            "ok": ok,
        }) + "\n")
    else:
        out.write(f"{word} y={format_rational(y)} abs_err={format_rational(err)} "
                  f"bound={format_rational(bound)} {'pass' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _run_cover(cfg: RunConfig, out) -> int:
    elements = egy_cover(cfg.m, cfg.n)
    rows = [(str(e.word), format_rational(e.interval.lo),
             format_rational(e.interval.length)) for e in elements]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("word", "lo", "length"))
    writer.writerows(rows)
    text = buf.getvalue()
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            fh.write(text)
        out.write(f"{len(rows)} cover elements -> {cfg.csv_path}\n")
    else:
        out.write(text)
    return EXIT_OK


def _mesh_row(sd: SetDescriptor, scale_log2: int, cells: int) -> tuple:
    return (sd.family.value, sd.m, format_rational(sd.alpha), scale_log2, cells)


def _run_mesh(cfg: RunConfig, out) -> int:
    sd = cfg.set_spec
    domain = cfg.domain if cfg.domain is not None else sd.default_domain()
    report = mesh_count(sd, Grid.from_log2(cfg.scale_log2, domain))
    row = _mesh_row(sd, cfg.scale_log2, report.occupied_cells)
    out.write(",".join(str(v) for v in row) + "\n")
    return EXIT_OK


def _run_dim(cfg: RunConfig, out) -> int:
    sd = cfg.set_spec
    j_lo, j_hi = cfg.scales
    fit = dim_estimate(sd, j_lo, j_hi)
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("set", "m", "alpha", "scale_log2", "cells"))
            for j, c in zip(fit.scales, fit.counts):
                writer.writerow(_mesh_row(sd, j, c))
    if cfg.plot_path:
        from .figures import save_dim_plot

        save_dim_plot(fit, sd.spec_string(), cfg.plot_path)
    out.write(json.dumps({
        "set": sd.spec_string(),
        "scales": list(fit.scales),
        "counts": list(fit.counts),
        "slope": fit.slope,
        "per_step_slopes": list(fit.per_step_slopes),
        "residual": fit.residual,
    }) + "\n")
    return EXIT_OK


def _run_verify(cfg: RunConfig, out) -> int:
    results = run_suite(cfg.suite, max_denom=cfg.max_denom, seed=cfg.seed)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        tag = "PASS" if r.ok else "FAIL"
        failures += not r.ok
        out.write(f"{tag}  {r.name.ljust(width)}  {r.detail}\n")
    out.write(f"{len(results) - failures}/{len(results)} checks passed\n")
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


_COMMANDS = {
    "expand": _run_expand,
    "approx": _run_approx,
    "cover-egf": _run_cover,
    "mesh": _run_mesh,
    "dim": _run_dim,
    "verify": _run_verify,
}


def run(cfg: RunConfig, out=None) -> int:
    """Execute a validated config; returns the process exit status."""
    out = out if out is not None else sys.stdout
    try:
        return _COMMANDS[cfg.command](cfg, out)
    except ResourceError as exc:
        print(f"fracdim: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"fracdim: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    return run(parse_args(args))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
