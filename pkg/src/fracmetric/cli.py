"""Command-line interface: ``fracmetric <command> <spec> ...``.

Exit codes: 0 success, 1 usage error, 2 invalid fractal description,
3 undecided verdict from ``check``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import catalog
from .checker import DEFAULT_MAX_DEPTH, MetricStatus, check_up, metric_verdict, verify_certificate
from .fractal import SpecError, format_word, parse_address, parse_spec, parse_word, validate_spec
from .graph import build_level_graph, cell_diameter, to_dot
from .metric import chain_distance, path_distance, scaling_report
from .paths import PathLimitExceeded, enumerate_strict_paths
from .rational import fmt, fmt_decimal, polyratio

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_UNDECIDED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_spec(source: str):
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return parse_spec(fh.read())
    try:
        return catalog.builtin(source)
    except KeyError as exc:
        raise UsageError(f"{source}: no such file or builtin fractal") from exc


def _alpha(args, spec):
    if args.alpha is None:
        raise UsageError("--alpha is required")
    try:
        return polyratio(args.alpha, spec.k)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --alpha: {exc}") from exc


def _address(text: str, spec):
    try:
        return parse_address(text, spec)
    except ValueError as exc:
        raise UsageError(f"bad address {text!r}: {exc}") from exc


def _level(m: int) -> int:
    if m < 0:
        raise UsageError("--level must be nonnegative")
    return m


def _emit(args, text: str, payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


# -- commands -------------------------------------------------------------


def cmd_validate(args, spec) -> int:
    report = validate_spec(spec)
    payload = {"fractal": spec.name, "passed": report.passed,
               "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks]}
    _emit(args, str(report), payload)
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_check(args, spec) -> int:
    alpha = _alpha(args, spec)
    verdict = check_up(spec, alpha, max_depth=args.max_depth)
    status = metric_verdict(verdict)
    payload = {"fractal": spec.name, "alpha": [fmt(a) for a in alpha], "status": status.value,
               "certificate": verdict.to_json()}
    _emit(args, f"{status.value} ({verdict.summary()})", payload)
    return EXIT_UNDECIDED if status is MetricStatus.UNDECIDED else EXIT_OK


def _distance_cmd(args, spec, fn, kind: str) -> int:
    alpha = _alpha(args, spec)
    m = _level(args.level)
    a, b = _address(args.source, spec), _address(args.target, spec)
    d = fn(spec, alpha, m, a, b)
    payload = {"fractal": spec.name, "level": m, "from": args.source, "to": args.target,
               kind: fmt(d), "decimal": fmt_decimal(d)}
    _emit(args, fmt(d), payload)
    return EXIT_OK


def cmd_dist(args, spec) -> int:
    return _distance_cmd(args, spec, path_distance, "distance")


def cmd_chains(args, spec) -> int:
    return _distance_cmd(args, spec, chain_distance, "chain_distance")


def cmd_diam(args, spec) -> int:
    alpha = _alpha(args, spec)
    m = _level(args.level)
    try:
        w = parse_word(args.cell, spec.k)
    except ValueError as exc:
        raise UsageError(f"bad --cell: {exc}") from exc
    if len(w) > m:
        raise UsageError("cell word longer than level")
    d = cell_diameter(build_level_graph(spec, m), alpha, w)
    payload = {"fractal": spec.name, "level": m, "cell": format_word(w, spec.k),
               "diameter": fmt(d), "decimal": fmt_decimal(d)}
    _emit(args, fmt(d), payload)
    return EXIT_OK


def cmd_scaling_report(args, spec) -> int:
    alpha = _alpha(args, spec)
    m = _level(args.level)
    if not 0 <= args.cell_depth <= m:
        raise UsageError("--cell-depth must lie in 0..level")
    rep = scaling_report(spec, alpha, m, args.cell_depth)
    _emit(args, rep.to_text(), rep.to_json())
    return EXIT_OK


def cmd_paths(args, spec) -> int:
    try:
        iota = tuple(int(x) for x in args.iota.split(","))
    except ValueError as exc:
        raise UsageError("--iota expects j1,j2") from exc
    if len(iota) != 2 or iota[0] == iota[1] or not all(1 <= j <= spec.N for j in iota):
        raise UsageError("--iota must be two distinct boundary indices")
    try:
        found = enumerate_strict_paths(spec, iota, limit=args.limit)
    except PathLimitExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    lines = [p.format() for p in found]
    lines.append(f"{len(found)} strict paths")
    payload = {"fractal": spec.name, "iota": list(iota),
               "paths": [{"vertices": p.addresses(),
                          "labels": [[s.iota[0], s.iota[1], format_word(s.word, spec.k)] for s in p.steps]}
                         for p in found]}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_export_dot(args, spec) -> int:
    m = _level(args.level)
    alpha = _alpha(args, spec) if args.alpha is not None else None
    sys.stdout.write(to_dot(build_level_graph(spec, m), alpha))
    return EXIT_OK


def cmd_verify_cert(args, spec) -> int:
    alpha = _alpha(args, spec)
    try:
        with open(args.cert, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from exc
    # accept either the bare certificate or the full output of `check --format json`
    cert = data.get("certificate", data) if isinstance(data, dict) else data
    ok = verify_certificate(spec, alpha, cert)
    _emit(args, "VALID" if ok else "INVALID", {"valid": ok})
    return EXIT_OK if ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fracmetric", description="Metric polyratio checker for finitely ramified fractals.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, *, alpha=True, level=False):
        sp = sub.add_parser(name)
        sp.add_argument("spec", help="spec file path or builtin name (%s)" % ", ".join(catalog.BUILTIN_NAMES))
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if alpha:
            sp.add_argument("--alpha", help="comma-separated ratios, e.g. 1/2,1/2,1/2 or 0.3,0.3")
        if level:
            sp.add_argument("--level", type=int, required=True)
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, alpha=False)
    add("check", cmd_check).add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    for name, fn in (("dist", cmd_dist), ("chains", cmd_chains)):
        sp = add(name, fn, level=True)
        sp.add_argument("--from", dest="source", required=True)
        sp.add_argument("--to", dest="target", required=True)
    add("diam", cmd_diam, level=True).add_argument("--cell", required=True)
    add("scaling-report", cmd_scaling_report, level=True).add_argument("--cell-depth", type=int, required=True)
    sp = add("paths", cmd_paths, alpha=False)
    sp.add_argument("--iota", required=True)
    sp.add_argument("--limit", type=int, default=100_000)
    add("export-dot", cmd_export_dot, level=True)
    add("verify-cert", cmd_verify_cert).add_argument("--cert", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        try:
            spec = _load_spec(args.spec)
        except SpecError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        if args.command != "validate" and not validate_spec(spec).passed:
            print(f"error: {spec.name} fails validation; run `fracmetric validate`", file=sys.stderr)
            return EXIT_INVALID
        return args.func(args, spec)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
