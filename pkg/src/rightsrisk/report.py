"""FRIA-style assessment reports following the Art. 27 AI Act structure,
with the Art. 26 deployer-obligation checklist.

Checklist statuses are analyst-supplied metadata; this module never claims
to verify them.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

from .dsl import print_kb
from .engine import Engine, EngineConfig, ScenarioFindings
from .minimizer import MinimizationResult, minimize_domain, minimize_purpose
from .model import KnowledgeBase, validate_kb
from .riskmatrix import assess_annotation
from .scoring import DegreeBreakdown, degree_domain, degree_purpose, degree_scenario

# Deployer duties under Art. 26 AI Act, one checklist item each.
ART26_ITEMS = (
    "Use the system with appropriate technical and organisational measures, "
    "in line with its instructions for use",
    "Assign human oversight to personnel with the necessary competence, "
    "training, and authority",
    "Ensure input data under the deployer's control is relevant and "
    "sufficiently representative",
    "Monitor operation, inform the provider of identified risks, and "
    "suspend use where a serious risk emerges",
    "Keep automatically generated logs for an appropriate period and report "
    "serious incidents to the relevant authorities",
    "Inform workers' representatives and affected workers before deploying "
    "the system in the workplace",
    "Complete the registration duties applying to public authorities and "
    "EU bodies",
    "Use the provider's information to carry out a data protection impact "
    "assessment where one is required",
    "Obtain the required authorisation before use for criminal "
    "investigation purposes",
    "Document each law-enforcement use and submit the required periodic "
    "reports",
    "Inform natural persons subject to the system's decisions and cooperate "
    "with national authorities",
)

CHECKLIST_STATUSES = ("addressed", "unaddressed", "not-applicable")


class ReportError(ValueError):
    pass


@dataclass
class AssessmentBundle:
    """Everything the pipeline derives for one domain (or purpose)."""
    kb: KnowledgeBase
    domain_id: Optional[str]
    purpose_id: Optional[str]
    findings: dict[str, ScenarioFindings]
    breakdowns: dict[str, DegreeBreakdown]
    total: DegreeBreakdown
    minimization: MinimizationResult
    diagnostics: list


def build_bundle(kb: KnowledgeBase, domain_id: Optional[str] = None,
                 purpose_id: Optional[str] = None,
                 config: EngineConfig = EngineConfig(),
                 mode: str = "fast") -> AssessmentBundle:
    if (domain_id is None) == (purpose_id is None):
        raise ReportError("select exactly one domain or purpose")
    engine = Engine(kb, config)
    if domain_id is not None:
        scenario_ids = list(kb.domain(domain_id).scenarios)
        total = degree_domain(kb, domain_id, engine=engine)
        minimization = minimize_domain(kb, domain_id, mode=mode, config=config)
    else:
        scenario_ids = []
        for did in kb.purpose(purpose_id).domains:
            scenario_ids.extend(kb.domain(did).scenarios)
        total = degree_purpose(kb, purpose_id, engine=engine)
        minimization = minimize_purpose(kb, purpose_id, mode=mode, config=config)
    findings = {sid: engine.assess(sid) for sid in scenario_ids}
    breakdowns = {sid: degree_scenario(f) for sid, f in findings.items()}
    diagnostics = validate_kb(kb) + engine.check_monotonicity()
    for f in findings.values():
        diagnostics.extend(f.diagnostics)
    return AssessmentBundle(kb, domain_id, purpose_id, findings, breakdowns,
                            total, minimization, diagnostics)


# ---------------------------------------------------------------------------
# Report structure
# ---------------------------------------------------------------------------

@dataclass
class ScenarioRisk:
    scenario: str
    statuses: dict[str, str]          # right -> Promoted/Demoted/Undefined
    demoted: list[str]
    collisions: list[list[str]]
    adopted: list[str]                # "right<x,y>" occurrence labels
    degree: Fraction
    band: Optional[str]               # qualitative, configuration-defined
    obligations: list[str]


@dataclass
class ChecklistItem:
    item: str
    status: str  # addressed | unaddressed | not-applicable


@dataclass
class FriaReport:
    meta: dict                        # title, generated_at, kb_hash, selector
    process: str                      # Art. 27(a)
    scenarios: list[ScenarioRisk]     # Art. 27(d)
    oversight: str                    # Art. 27(e)
    mitigation: dict                  # Art. 27(f): text + minimizer recommendation
    degrees: dict                     # per-scenario and total degrees (exact)
    minimization: dict
    checklist: list[ChecklistItem]    # the eleven Art. 26 duties
    diagnostics: list[str]


def kb_hash(kb: KnowledgeBase) -> str:
    return hashlib.sha256(print_kb(kb).encode("utf-8")).hexdigest()


def _frac(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 \
        else str(value.numerator)


def build_report(kb: KnowledgeBase, bundle: AssessmentBundle,
                 metadata: Optional[dict] = None) -> FriaReport:
    """Assemble the FRIA report. Every demoted right of every assessed
    scenario lands in the risks-of-harm section; the minimizer's canonical
    subset is the mitigation recommendation."""
    if bundle.kb is not kb and bundle.kb != kb:
        raise ReportError("bundle was built from a different knowledge base")
    metadata = metadata or {}
    selector = bundle.domain_id or bundle.purpose_id
    generated_at = metadata.get("generated_at") or datetime.now(timezone.utc).isoformat()

    scenarios: list[ScenarioRisk] = []
    for sid in sorted(bundle.findings):
        f = bundle.findings[sid]
        breakdown = bundle.breakdowns[sid]
        ann = kb.risk_annotation(sid)
        band = None
        if ann is not None and all(getattr(ann, n) is not None
                                   for n in ann.FIELDS):
            band = assess_annotation(ann.hazard, ann.response, ann.intensity,
                                     ann.sensitivity, ann.vulnerability).band
        scenarios.append(ScenarioRisk(
            scenario=sid,
            statuses={r: s.value for r, s in sorted(f.statuses.items())},
            demoted=sorted({o.right for o in f.demoted_occurrences}),
            collisions=sorted(sorted(pair) for pair in f.collisions),
            adopted=sorted(str(o) for o in f.adopted),
            degree=breakdown.degree,
            band=band,
            obligations=[o.id for o in kb.scenario_obligations(sid)],
        ))

    statuses = metadata.get("checklist", {})
    checklist = []
    for i, item in enumerate(ART26_ITEMS):
        status = statuses.get(i, statuses.get(str(i), "unaddressed"))
        if status not in CHECKLIST_STATUSES:
            raise ReportError(f"invalid checklist status {status!r}")
        checklist.append(ChecklistItem(item, status))

    mini = bundle.minimization
    return FriaReport(
        meta={
            "title": metadata.get("title", f"Fundamental rights impact assessment: {selector}"),
            "generated_at": generated_at,
            "kb_hash": kb_hash(kb),
            "selector": selector,
            "kind": "domain" if bundle.domain_id else "purpose",
        },
        process=metadata.get("process", ""),
        scenarios=scenarios,
        oversight=metadata.get("oversight", ""),
        mitigation={
            "text": metadata.get("mitigation", ""),
            "recommended_subset": sorted(mini.canonical),
            "optimal_degree": _frac(mini.optimal_degree),
        },
        degrees={
            "per_scenario": {sid: _frac(b.degree)
                             for sid, b in sorted(bundle.breakdowns.items())},
            "xi": _frac(bundle.total.xi),
            "delta": _frac(bundle.total.delta),
            "total": _frac(bundle.total.degree),
        },
        minimization={
            "optimal_degree": _frac(mini.optimal_degree),
            "maximizers": [sorted(m) for m in mini.maximizers],
            "maximizer_count": mini.maximizer_count,
            "canonical": sorted(mini.canonical),
            "method": mini.method,
        },
        checklist=checklist,
        diagnostics=[str(d) for d in bundle.diagnostics],
    )


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def report_to_dict(report: FriaReport) -> dict:
    return {
        "meta": report.meta,
        "process": report.process,
        "scenarios": [{
            "scenario": s.scenario,
            "statuses": s.statuses,
            "demoted": s.demoted,
            "collisions": s.collisions,
            "adopted": s.adopted,
            "degree": _frac(s.degree),
            "band": s.band,
            "obligations": s.obligations,
        } for s in report.scenarios],
        "oversight": report.oversight,
        "mitigation": report.mitigation,
        "degrees": report.degrees,
        "minimization": report.minimization,
        "checklist": [{"item": c.item, "status": c.status}
                      for c in report.checklist],
        "diagnostics": report.diagnostics,
    }


def report_from_dict(data: dict) -> FriaReport:
    return FriaReport(
        meta=data["meta"],
        process=data["process"],
        scenarios=[ScenarioRisk(
            scenario=s["scenario"],
            statuses=s["statuses"],
            demoted=s["demoted"],
            collisions=s["collisions"],
            adopted=s["adopted"],
            degree=Fraction(s["degree"]),
            band=s["band"],
            obligations=s["obligations"],
        ) for s in data["scenarios"]],
        oversight=data["oversight"],
        mitigation=data["mitigation"],
        degrees=data["degrees"],
        minimization=data["minimization"],
        checklist=[ChecklistItem(c["item"], c["status"])
                   for c in data["checklist"]],
        diagnostics=data["diagnostics"],
    )


def parse_report(text: str) -> FriaReport:
    return report_from_dict(json.loads(text))


def _render_markdown(report: FriaReport) -> str:
    lines = [f"# {report.meta['title']}", ""]
    lines += [f"- Generated: {report.meta['generated_at']}",
              f"- Input hash: `{report.meta['kb_hash']}`",
              f"- Assessed {report.meta['kind']}: `{report.meta['selector']}`",
              ""]
    lines += ["## Process description (Art. 27(a))", "",
              report.process or "_not provided_", ""]
    lines += ["## Specific risks of harm (Art. 27(d))", ""]
    for s in report.scenarios:
        lines.append(f"### Scenario `{s.scenario}`")
        lines.append("")
        if s.demoted:
            lines.append("Demoted rights: " + ", ".join(f"`{r}`" for r in s.demoted))
        else:
            lines.append("Demoted rights: none identified")
        if s.collisions:
            pairs = "; ".join(" / ".join(p) for p in s.collisions)
            lines.append(f"Collisions: {pairs}")
        lines.append("Adopted: " + (", ".join(s.adopted) if s.adopted else "none"))
        lines.append(f"Impact degree: {_frac(s.degree)}")
        if s.band is not None:
            lines.append(f"Risk band: {s.band} (qualitative, configuration-defined)")
        if s.obligations:
            lines.append("Obligations: " + ", ".join(s.obligations))
        statuses = ", ".join(f"{r}={v}" for r, v in s.statuses.items())
        lines.append(f"Statuses: {statuses or 'none'}")
        lines.append("")
    lines += ["## Human oversight measures (Art. 27(e))", "",
              report.oversight or "_not provided_", ""]
    lines += ["## Measures on materialization of risks (Art. 27(f))", ""]
    if report.mitigation["text"]:
        lines.append(report.mitigation["text"])
    subset = ", ".join(f"`{s}`" for s in report.mitigation["recommended_subset"])
    lines.append(f"Recommended scenario subset (degree "
                 f"{report.mitigation['optimal_degree']}): {subset}")
    lines.append("")
    lines += ["## Degrees", ""]
    for sid, deg in report.degrees["per_scenario"].items():
        lines.append(f"- `{sid}`: {deg}")
    lines.append(f"- total: {report.degrees['total']} "
                 f"(xi {report.degrees['xi']}, delta {report.degrees['delta']})")
    lines.append("")
    lines += ["## Deployer obligations checklist (Art. 26)", ""]
    for c in report.checklist:
        mark = {"addressed": "x", "unaddressed": " ", "not-applicable": "-"}[c.status]
        lines.append(f"- [{mark}] {c.item}")
    lines.append("")
    if report.diagnostics:
        lines += ["## Diagnostics", ""]
        lines += [f"- {d}" for d in report.diagnostics]
        lines.append("")
    return "\n".join(lines)


def render(report: FriaReport, fmt: str = "json") -> str:
    """Deterministic rendering; the JSON form parses back to an equal
    report."""
    if fmt == "json":
        return json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"
    if fmt == "markdown":
        return _render_markdown(report)
    raise ReportError(f"unknown format {fmt!r}")
