"""Core domain types: rights, scenarios, rules, chains, and the knowledge base.

Everything here is an immutable value (frozen dataclasses) except the
KnowledgeBase container itself, which is assembled once by the parser and
then treated as read-only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union


class ModelError(Exception):
    """Raised for structural errors that cannot be reported as diagnostics."""


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}[{self.code}]: {self.message}"


# ---------------------------------------------------------------------------
# Rights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasicRight:
    id: str


@dataclass(frozen=True)
class RightRef:
    """Leaf of a right expression, naming a basic or fundamental right."""
    name: str


@dataclass(frozen=True)
class NotExpr:
    operand: "RightExpr"


@dataclass(frozen=True)
class AndExpr:
    operands: tuple["RightExpr", ...]


@dataclass(frozen=True)
class OrExpr:
    operands: tuple["RightExpr", ...]


RightExpr = Union[RightRef, NotExpr, AndExpr, OrExpr]


@dataclass(frozen=True)
class FundamentalRight:
    id: str
    definition: Optional[RightExpr] = None  # None => atomic


@dataclass(frozen=True)
class FeatureLiteral:
    atom: str
    positive: bool = True

    def negated(self) -> "FeatureLiteral":
        return FeatureLiteral(self.atom, not self.positive)

    def __str__(self) -> str:
        return self.atom if self.positive else "!" + self.atom


@dataclass(frozen=True)
class Scenario:
    id: str
    features: frozenset[FeatureLiteral]


@dataclass(frozen=True)
class Obligation:
    id: str
    text: str
    applies_to: str  # scenario id


@dataclass(frozen=True)
class DeploymentDomain:
    id: str
    scenarios: tuple[str, ...]


@dataclass(frozen=True)
class Purpose:
    id: str
    domains: tuple[str, ...]


# ---------------------------------------------------------------------------
# Rules and heads
# ---------------------------------------------------------------------------

PRED_KINDS = ("promotes", "demotes", "not_demotes", "collides", "not_collides")
UNARY_PREDS = ("promotes", "demotes", "not_demotes")
BINARY_PREDS = ("collides", "not_collides")


@dataclass(frozen=True)
class PredHead:
    kind: str  # one of PRED_KINDS
    rights: tuple[str, ...]  # one id for unary, two for binary

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(self.rights)})"


@dataclass(frozen=True)
class ChainHead:
    rights: tuple[str, ...]

    def __str__(self) -> str:
        return " > ".join(self.rights)


Head = Union[PredHead, ChainHead]


@dataclass(frozen=True)
class Rule:
    id: str
    body: tuple[FeatureLiteral, ...]  # empty => unconditional
    head: Head
    strength: int = 0


@dataclass(frozen=True)
class AssertStmt:
    """`assert HEAD in SCENARIO;` — sugar for a rule guarded by the
    scenario's full feature conjunction."""
    scenario: str
    head: Head


@dataclass(frozen=True)
class PriorityChain:
    """A fired priority sequence: rights[0] is preferred over rights[1], etc."""
    id: str
    rights: tuple[str, ...]
    guard: tuple[FeatureLiteral, ...] = ()


@dataclass(frozen=True)
class RiskAnnotation:
    scenario: str
    hazard: Optional[int] = None
    response: Optional[int] = None
    intensity: Optional[int] = None
    sensitivity: Optional[int] = None
    vulnerability: Optional[int] = None

    FIELDS = ("hazard", "response", "intensity", "sensitivity", "vulnerability")


# ---------------------------------------------------------------------------
# Knowledge base
# ---------------------------------------------------------------------------

@dataclass
class KnowledgeBase:
    basic_rights: list[BasicRight] = field(default_factory=list)
    rights: list[FundamentalRight] = field(default_factory=list)
    scenarios: list[Scenario] = field(default_factory=list)
    domains: list[DeploymentDomain] = field(default_factory=list)
    purposes: list[Purpose] = field(default_factory=list)
    obligations: list[Obligation] = field(default_factory=list)
    assertions: list[AssertStmt] = field(default_factory=list)
    rules: list[Rule] = field(default_factory=list)
    risk_annotations: list[RiskAnnotation] = field(default_factory=list)

    # -- lookups ------------------------------------------------------------

    def scenario(self, sid: str) -> Scenario:
        for s in self.scenarios:
            if s.id == sid:
                return s
        raise KeyError(f"unknown scenario {sid!r}")

    def domain(self, did: str) -> DeploymentDomain:
        for d in self.domains:
            if d.id == did:
                return d
        raise KeyError(f"unknown domain {did!r}")

    def purpose(self, pid: str) -> Purpose:
        for p in self.purposes:
            if p.id == pid:
                return p
        raise KeyError(f"unknown purpose {pid!r}")

    def right_ids(self) -> set[str]:
        return {r.id for r in self.rights}

    def basic_ids(self) -> set[str]:
        return {b.id for b in self.basic_rights}

    def scenario_obligations(self, sid: str) -> list[Obligation]:
        return [o for o in self.obligations if o.applies_to == sid]

    def risk_annotation(self, sid: str) -> Optional[RiskAnnotation]:
        for a in self.risk_annotations:
            if a.scenario == sid:
                return a
        return None

    def all_rules(self) -> list[Rule]:
        """Explicit rules plus one desugared rule per assert statement.

        An assert's rule body is exactly the named scenario's feature
        conjunction, in sorted order so the expansion is deterministic.
        """
        rules = list(self.rules)
        for i, a in enumerate(self.assertions):
            try:
                scen = self.scenario(a.scenario)
            except KeyError:
                continue  # reported by validate_kb
            body = tuple(sorted(scen.features, key=lambda l: (l.atom, l.positive)))
            rules.append(Rule(id=f"assert#{i}@{a.scenario}", body=body, head=a.head))
        return rules


# ---------------------------------------------------------------------------
# Feature satisfaction
# ---------------------------------------------------------------------------

def satisfies(features: Iterable[FeatureLiteral],
              body: Iterable[FeatureLiteral]) -> bool:
    """True iff every body literal is listed among the features.

    Atoms absent from the feature set are unknown, not false: they satisfy
    neither polarity.
    """
    fs = features if isinstance(features, (set, frozenset)) else set(features)
    return all(lit in fs for lit in body)


# ---------------------------------------------------------------------------
# Right expansion and propositional checks
# ---------------------------------------------------------------------------

def expand_right(kb: KnowledgeBase, right_id: str) -> RightExpr:
    """Definitional expansion of a fundamental right down to basic-right
    leaves. Atomic rights (no definition) expand to a single self leaf."""
    defs = {r.id: r.definition for r in kb.rights}
    basics = kb.basic_ids()
    if right_id not in defs and right_id not in basics:
        raise KeyError(f"unknown right {right_id!r}")

    def expand_name(name: str, stack: tuple[str, ...]) -> RightExpr:
        if name in stack:
            cycle = " -> ".join(stack + (name,))
            raise ModelError(f"recursive right definition: {cycle}")
        definition = defs.get(name)
        if definition is None:
            return RightRef(name)
        return expand_expr(definition, stack + (name,))

    def expand_expr(expr: RightExpr, stack: tuple[str, ...]) -> RightExpr:
        if isinstance(expr, RightRef):
            if expr.name in basics:
                return expr
            return expand_name(expr.name, stack)
        if isinstance(expr, NotExpr):
            return NotExpr(expand_expr(expr.operand, stack))
        if isinstance(expr, AndExpr):
            return AndExpr(tuple(expand_expr(e, stack) for e in expr.operands))
        if isinstance(expr, OrExpr):
            return OrExpr(tuple(expand_expr(e, stack) for e in expr.operands))
        raise TypeError(f"not a right expression: {expr!r}")

    return expand_name(right_id, ())


def expr_atoms(expr: RightExpr) -> set[str]:
    if isinstance(expr, RightRef):
        return {expr.name}
    if isinstance(expr, NotExpr):
        return expr_atoms(expr.operand)
    out: set[str] = set()
    for e in expr.operands:
        out |= expr_atoms(e)
    return out


def eval_expr(expr: RightExpr, assignment: dict[str, bool]) -> bool:
    if isinstance(expr, RightRef):
        return assignment[expr.name]
    if isinstance(expr, NotExpr):
        return not eval_expr(expr.operand, assignment)
    if isinstance(expr, AndExpr):
        return all(eval_expr(e, assignment) for e in expr.operands)
    if isinstance(expr, OrExpr):
        return any(eval_expr(e, assignment) for e in expr.operands)
    raise TypeError(f"not a right expression: {expr!r}")


_SAT_ATOM_CAP = 20  # truth tables stay exhaustive up to this many atoms


def jointly_satisfiable(e1: RightExpr, e2: RightExpr) -> bool:
    """Small satisfiability test: can both expressions hold at once?

    Definitions are small; an exhaustive truth table over their atoms is
    enough. Pairs with more than _SAT_ATOM_CAP atoms are treated as
    compatible rather than enumerated.
    """
    atoms = sorted(expr_atoms(e1) | expr_atoms(e2))
    if len(atoms) > _SAT_ATOM_CAP:
        return True
    for values in itertools.product((False, True), repeat=len(atoms)):
        assignment = dict(zip(atoms, values))
        if eval_expr(e1, assignment) and eval_expr(e2, assignment):
            return True
    return False


def logically_incompatible(kb: KnowledgeBase, r1: str, r2: str) -> bool:
    """True iff the expanded definitions of r1 and r2 can never hold together."""
    try:
        e1 = expand_right(kb, r1)
        e2 = expand_right(kb, r2)
    except (KeyError, ModelError):
        return False
    return not jointly_satisfiable(e1, e2)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _dup_diags(kind: str, ids: list[str]) -> list[Diagnostic]:
    seen: set[str] = set()
    out = []
    for i in ids:
        if i in seen:
            out.append(Diagnostic("error", "duplicate-id",
                                  f"duplicate {kind} {i!r}"))
        seen.add(i)
    return out


def _polarity_diags(where: str, lits: Iterable[FeatureLiteral]) -> list[Diagnostic]:
    atoms: dict[str, set[bool]] = {}
    for lit in lits:
        atoms.setdefault(lit.atom, set()).add(lit.positive)
    return [Diagnostic("error", "polarity-conflict",
                       f"{where}: atom {a!r} appears with both polarities")
            for a, pols in sorted(atoms.items()) if len(pols) == 2]


def validate_kb(kb: KnowledgeBase) -> list[Diagnostic]:
    """All referential, duplicate, polarity, and range violations.

    Returns an empty list iff the knowledge base is well-formed. Never
    raises: diagnostics are the output.
    """
    diags: list[Diagnostic] = []
    diags += _dup_diags("basic right", [b.id for b in kb.basic_rights])
    diags += _dup_diags("right", [r.id for r in kb.rights])
    diags += _dup_diags("scenario", [s.id for s in kb.scenarios])
    diags += _dup_diags("domain", [d.id for d in kb.domains])
    diags += _dup_diags("purpose", [p.id for p in kb.purposes])
    diags += _dup_diags("obligation", [o.id for o in kb.obligations])
    diags += _dup_diags("rule", [r.id for r in kb.rules])

    basics = kb.basic_ids()
    rights = kb.right_ids()
    declared_rights = basics | rights
    scen_ids = {s.id for s in kb.scenarios}
    dom_ids = {d.id for d in kb.domains}

    for b in kb.basic_rights:
        if not b.id:
            diags.append(Diagnostic("error", "empty-id", "basic right with empty id"))

    for r in kb.rights:
        if r.definition is None:
            continue
        for atom in sorted(expr_atoms(r.definition)):
            if atom not in declared_rights:
                diags.append(Diagnostic(
                    "error", "unknown-right",
                    f"right {r.id!r}: definition references undeclared right {atom!r}"))
        try:
            expand_right(kb, r.id)
        except ModelError as exc:
            diags.append(Diagnostic("error", "recursive-definition", str(exc)))
        except KeyError:
            pass

    for s in kb.scenarios:
        if not s.features:
            diags.append(Diagnostic("error", "empty-scenario",
                                    f"scenario {s.id!r} has no features"))
        diags += _polarity_diags(f"scenario {s.id!r}", s.features)

    for d in kb.domains:
        for sid in d.scenarios:
            if sid not in scen_ids:
                diags.append(Diagnostic("error", "unknown-scenario",
                                        f"domain {d.id!r} references unknown scenario {sid!r}"))
        diags += _dup_diags(f"scenario in domain {d.id!r}", list(d.scenarios))

    for p in kb.purposes:
        for did in p.domains:
            if did not in dom_ids:
                diags.append(Diagnostic("error", "unknown-domain",
                                        f"purpose {p.id!r} references unknown domain {did!r}"))
        diags += _dup_diags(f"domain in purpose {p.id!r}", list(p.domains))

    for o in kb.obligations:
        if o.applies_to not in scen_ids:
            diags.append(Diagnostic("error", "unknown-scenario",
                                    f"obligation {o.id!r} applies to unknown scenario {o.applies_to!r}"))

    def check_head(where: str, head: Head) -> None:
        if isinstance(head, PredHead):
            for rid in head.rights:
                if rid not in declared_rights:
                    diags.append(Diagnostic("error", "unknown-right",
                                            f"{where}: unknown right {rid!r}"))
            if head.kind in BINARY_PREDS and len(set(head.rights)) != len(head.rights):
                diags.append(Diagnostic("error", "self-collision",
                                        f"{where}: {head.kind} needs two distinct rights"))
        else:
            for rid in head.rights:
                if rid not in declared_rights:
                    diags.append(Diagnostic("error", "unknown-right",
                                            f"{where}: unknown right {rid!r} in chain"))
            if len(set(head.rights)) != len(head.rights):
                diags.append(Diagnostic("error", "duplicate-chain-right",
                                        f"{where}: chain repeats a right"))

    for a in kb.assertions:
        if a.scenario not in scen_ids:
            diags.append(Diagnostic("error", "unknown-scenario",
                                    f"assert references unknown scenario {a.scenario!r}"))
        check_head(f"assert in {a.scenario!r}", a.head)

    for rule in kb.rules:
        diags += _polarity_diags(f"rule {rule.id!r} body", rule.body)
        check_head(f"rule {rule.id!r}", rule.head)

    for ann in kb.risk_annotations:
        if ann.scenario not in scen_ids:
            diags.append(Diagnostic("error", "unknown-scenario",
                                    f"risk annotation for unknown scenario {ann.scenario!r}"))
        for name in RiskAnnotation.FIELDS:
            value = getattr(ann, name)
            if value is None:
                diags.append(Diagnostic("error", "missing-risk-field",
                                        f"risk {ann.scenario!r}: missing field {name!r}"))
            elif not 1 <= value <= 5:
                diags.append(Diagnostic("error", "risk-range",
                                        f"risk {ann.scenario!r}: {name} = {value} outside 1..5"))
    diags += _dup_diags("risk annotation", [a.scenario for a in kb.risk_annotations])

    return diags
