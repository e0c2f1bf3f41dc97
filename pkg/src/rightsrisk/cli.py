"""Command-line front end: parse -> assess -> score -> minimize -> report.

Exit codes: 0 success, 1 semantic or selection failure, 2 usage, I/O, or
parse failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from .dsl import ParseError, parse_kb
from .engine import Engine, EngineConfig
from .minimizer import SizeError, minimize_domain, minimize_purpose
from .model import KnowledgeBase, validate_kb
from .report import (build_bundle, build_report, render, report_to_dict,
                     ReportError)
from .scoring import degree_scenario

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_USAGE = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _color_enabled() -> bool:
    return os.environ.get("RIGHTS_COLOR", "0") == "1"


def _frac(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 \
        else str(value.numerator)


def _load_kb(path: str) -> KnowledgeBase:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_USAGE)
    try:
        return parse_kb(text, file=path)
    except ParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_USAGE)


def _require_valid(kb: KnowledgeBase) -> None:
    errors = [d for d in validate_kb(kb) if d.severity == "error"]
    if errors:
        raise CliError("\n".join(str(d) for d in errors), EXIT_SEMANTIC)


def _config(args) -> EngineConfig:
    return EngineConfig(
        derived_collision=not args.no_derived_collision,
        monotonicity_check=not args.no_monotonicity_check,
    )


def _pick_domain(kb: KnowledgeBase, args) -> Optional[str]:
    if getattr(args, "domain", None):
        try:
            kb.domain(args.domain)
        except KeyError as exc:
            raise CliError(str(exc), EXIT_SEMANTIC)
        return args.domain
    if len(kb.domains) == 1:
        return kb.domains[0].id
    if not kb.domains:
        raise CliError("no domain declared", EXIT_SEMANTIC)
    raise CliError("ambiguous domain: pass --domain "
                   f"(candidates: {', '.join(d.id for d in kb.domains)})",
                   EXIT_SEMANTIC)


def _pick_purpose(kb: KnowledgeBase, args) -> str:
    if getattr(args, "purpose", None):
        try:
            kb.purpose(args.purpose)
        except KeyError as exc:
            raise CliError(str(exc), EXIT_SEMANTIC)
        return args.purpose
    if len(kb.purposes) == 1:
        return kb.purposes[0].id
    if not kb.purposes:
        raise CliError("no purpose declared", EXIT_SEMANTIC)
    raise CliError("ambiguous purpose: pass --purpose "
                   f"(candidates: {', '.join(p.id for p in kb.purposes)})",
                   EXIT_SEMANTIC)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    kb = _load_kb(args.file)
    diags = validate_kb(kb)
    if args.json:
        print(json.dumps([{"severity": d.severity, "code": d.code,
                           "message": d.message} for d in diags], indent=2))
    else:
        for d in diags:
            print(d)
    if any(d.severity == "error" for d in diags):
        return EXIT_SEMANTIC
    if not args.json:
        print("ok")
    return EXIT_OK


def _scenario_block(engine: Engine, sid: str) -> list[str]:
    findings = engine.assess(sid)
    breakdown = degree_scenario(findings)
    lines = [f"scenario {sid}:"]
    statuses = " ".join(f"{r}={s.value}"
                        for r, s in sorted(findings.statuses.items()))
    lines.append(f"  statuses: {statuses or '(none)'}")
    if findings.collisions:
        pairs = "; ".join("(" + ", ".join(sorted(p)) + ")"
                          for p in sorted(findings.collisions, key=sorted))
        lines.append(f"  collisions: {pairs}")
    adopted = " ".join(sorted(str(o) for o in findings.adopted))
    lines.append(f"  adopted: {adopted or '(none)'}")
    demoted = " ".join(sorted(str(o) for o in findings.demoted_occurrences))
    lines.append(f"  demoted: {demoted or '(none)'}")
    lines.append(f"  degree: {_frac(breakdown.degree)} "
                 f"(xi={_frac(breakdown.xi)}, delta={_frac(breakdown.delta)})")
    for d in findings.diagnostics:
        lines.append(f"  {d}")
    return lines


def cmd_assess(args) -> int:
    kb = _load_kb(args.file)
    _require_valid(kb)
    config = _config(args)
    engine = Engine(kb, config)

    if args.scenario:
        try:
            kb.scenario(args.scenario)
        except KeyError:
            raise CliError(f"unknown scenario {args.scenario!r}", EXIT_SEMANTIC)
        if args.json:
            bundle_json = _scenario_json(engine, args.scenario)
            print(json.dumps(bundle_json, indent=2, sort_keys=True))
        else:
            print("\n".join(_scenario_block(engine, args.scenario)))
            for d in engine.check_monotonicity():
                print(d)
        return EXIT_OK

    if args.purpose:
        purpose_id = _pick_purpose(kb, args)
        bundle = build_bundle(kb, purpose_id=purpose_id, config=config,
                              mode=args.mode)
        label = f"purpose {purpose_id}"
    else:
        domain_id = _pick_domain(kb, args)
        bundle = build_bundle(kb, domain_id=domain_id, config=config,
                              mode=args.mode)
        label = f"domain {domain_id}"

    if args.json:
        report = build_report(kb, bundle, {"generated_at": args.fixed_time or ""})
        print(json.dumps(report_to_dict(report), indent=2, sort_keys=True))
        return EXIT_OK

    for sid in bundle.findings:
        print("\n".join(_scenario_block(engine, sid)))
    print(f"{label} degree: {_frac(bundle.total.degree)} "
          f"(xi={_frac(bundle.total.xi)}, delta={_frac(bundle.total.delta)})")
    for d in engine.check_monotonicity():
        print(d)
    return EXIT_OK


def _scenario_json(engine: Engine, sid: str) -> dict:
    findings = engine.assess(sid)
    breakdown = degree_scenario(findings)
    return {
        "scenario": sid,
        "statuses": {r: s.value for r, s in sorted(findings.statuses.items())},
        "collisions": sorted(sorted(p) for p in findings.collisions),
        "adopted": sorted(str(o) for o in findings.adopted),
        "demoted": sorted(str(o) for o in findings.demoted_occurrences),
        "degree": _frac(breakdown.degree),
        "xi": _frac(breakdown.xi),
        "delta": _frac(breakdown.delta),
        "diagnostics": [str(d) for d in findings.diagnostics],
    }


def cmd_minimize(args) -> int:
    kb = _load_kb(args.file)
    _require_valid(kb)
    config = _config(args)
    try:
        if args.gpai or args.purpose:
            purpose_id = _pick_purpose(kb, args)
            result = minimize_purpose(kb, purpose_id, mode=args.mode, config=config)
            label = f"purpose {purpose_id}"
        else:
            domain_id = _pick_domain(kb, args)
            result = minimize_domain(kb, domain_id, mode=args.mode, config=config)
            label = f"domain {domain_id}"
    except SizeError as exc:
        raise CliError(str(exc), EXIT_SEMANTIC)

    if args.json:
        print(json.dumps({
            "selector": label,
            "optimal_degree": _frac(result.optimal_degree),
            "maximizers": [sorted(m) for m in result.maximizers],
            "maximizer_count": result.maximizer_count,
            "canonical": sorted(result.canonical),
            "per_unit_degrees": {k: _frac(v)
                                 for k, v in sorted(result.per_unit_degrees.items())},
            "method": result.method,
        }, indent=2, sort_keys=True))
        return EXIT_OK

    print(f"{label}: optimal degree {_frac(result.optimal_degree)} "
          f"({result.method})")
    shown = result.maximizers
    print(f"maximizers ({result.maximizer_count}):")
    for m in shown:
        print("  {" + ", ".join(sorted(m)) + "}")
    if result.maximizer_count > len(shown):
        print(f"  ... {result.maximizer_count - len(shown)} more")
    print("canonical: {" + ", ".join(sorted(result.canonical)) + "}")
    return EXIT_OK


def cmd_explain(args) -> int:
    kb = _load_kb(args.file)
    _require_valid(kb)
    engine = Engine(kb, _config(args))
    try:
        explanation = engine.explain(args.scenario, args.conclusion)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE)
    except KeyError as exc:
        raise CliError(str(exc.args[0]), EXIT_SEMANTIC)
    if explanation.derivable:
        print(explanation.trace.render())
        return EXIT_OK
    print(explanation.blocked)
    return EXIT_SEMANTIC


def cmd_fria(args) -> int:
    kb = _load_kb(args.file)
    _require_valid(kb)
    config = _config(args)
    try:
        if args.gpai or args.purpose:
            purpose_id = _pick_purpose(kb, args)
            bundle = build_bundle(kb, purpose_id=purpose_id, config=config,
                                  mode=args.mode)
        else:
            domain_id = _pick_domain(kb, args)
            bundle = build_bundle(kb, domain_id=domain_id, config=config,
                                  mode=args.mode)
    except (SizeError, ReportError) as exc:
        raise CliError(str(exc), EXIT_SEMANTIC)

    metadata = {
        "process": args.process or "",
        "oversight": args.oversight or "",
        "mitigation": args.mitigation or "",
    }
    if args.fixed_time:
        metadata["generated_at"] = args.fixed_time
    report = build_report(kb, bundle, metadata)
    text = render(report, args.format)

    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}", EXIT_USAGE)
        bands = sorted({s.band for s in report.scenarios if s.band})
        band = ", ".join(bands) if bands else "n/a"
        print(f"wrote {args.out}: degree {report.degrees['total']}, band {band}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--no-derived-collision", action="store_true",
                        help="do not derive collisions from promoted/demoted pairs")
    parser.add_argument("--no-monotonicity-check", action="store_true",
                        help="suppress monotonicity warnings")
    parser.add_argument("--mode", choices=("exhaustive", "fast"), default="fast",
                        help="subset search mode (default fast)")
    parser.add_argument("--json", action="store_true",
                        help="emit machine-readable JSON")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rightsrisk",
        description="Rights-impact assessment for AI deployment scenarios")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate a .rights file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("assess", help="derive statuses, adoptions, and degrees")
    p.add_argument("file")
    p.add_argument("--scenario")
    p.add_argument("--domain")
    p.add_argument("--purpose")
    p.add_argument("--fixed-time")
    _add_common(p)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("minimize", help="find risk-minimizing subsets")
    p.add_argument("file")
    p.add_argument("--domain")
    p.add_argument("--purpose")
    p.add_argument("--gpai", action="store_true",
                   help="minimize over the purpose's domains")
    _add_common(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("explain", help="derivation trace for one conclusion")
    p.add_argument("file")
    p.add_argument("scenario")
    p.add_argument("conclusion", help='e.g. "choice(S, public_health)"')
    _add_common(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("fria", help="write a FRIA-style assessment report")
    p.add_argument("file")
    p.add_argument("--domain")
    p.add_argument("--purpose")
    p.add_argument("--gpai", action="store_true")
    p.add_argument("--format", choices=("json", "markdown"), default="markdown")
    p.add_argument("--out")
    p.add_argument("--process", help="Art. 27(a) process description")
    p.add_argument("--oversight", help="Art. 27(e) oversight measures")
    p.add_argument("--mitigation", help="Art. 27(f) mitigation measures")
    p.add_argument("--fixed-time", help="pin the report timestamp (RFC 3339)")
    _add_common(p)
    p.set_defaults(func=cmd_fria)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
