"""Lexer, parser, and canonical printer for the `.rights` specification
language.

Grammar (EBNF):

    kb        = { stmt } ;
    stmt      = basicDecl | rightDecl | scenDecl | domDecl | purpDecl
              | oblDecl | assertStmt | ruleStmt | riskDecl ;
    basicDecl = "basic" ident { "," ident } ";" ;
    rightDecl = "right" ident [ ":=" rexpr ] ";" ;
    rexpr     = rterm { "|" rterm } ;
    rterm     = rfactor { "&" rfactor } ;
    rfactor   = [ "!" ] ( ident | "(" rexpr ")" ) ;
    scenDecl  = "scenario" ident "{" [ lit { "," lit } ] "}" ;
    domDecl   = "domain" ident "{" ident { "," ident } "}" ;
    purpDecl  = "purpose" ident "{" ident { "," ident } "}" ;
    oblDecl   = "obligation" ident string "applies" ident ";" ;
    assertStmt= "assert" head "in" ident ";" ;
    ruleStmt  = "rule" ident [ "[" int "]" ] ":" [ body ] "=>" head ";" ;
    body      = lit { "&" lit } ;
    head      = pred "(" ident [ "," ident ] ")" | chain ;
    pred      = "promotes" | "demotes" | "not_demotes"
              | "collides" | "not_collides" ;
    chain     = ident ">" ident { ">" ident } ;
    riskDecl  = "risk" ident "{" riskField { "," riskField } "}" ;
    riskField = ("hazard"|"response"|"intensity"|"sensitivity"
                |"vulnerability") ":" int ;
    lit       = [ "!" ] ident ;

Comments run from `//` to end of line. Identifiers are
[A-Za-z_][A-Za-z0-9_]*, case-sensitive.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import (AndExpr, AssertStmt, BasicRight, ChainHead,
                    DeploymentDomain, FeatureLiteral, FundamentalRight, Head,
                    KnowledgeBase, NotExpr, Obligation, OrExpr, PredHead,
                    Purpose, RightExpr, RightRef, RiskAnnotation, Rule,
                    Scenario, PRED_KINDS, BINARY_PREDS)

KEYWORDS = {"basic", "right", "scenario", "domain", "purpose", "obligation",
            "assert", "rule", "risk", "in", "applies"}

_PUNCT = {
    "{": "lbrace", "}": "rbrace", "(": "lparen", ")": "rparen",
    "[": "lbracket", "]": "rbracket", ",": "comma", ";": "semi",
    ">": "gt", "|": "pipe", "&": "amp", "!": "bang",
}


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: SourceSpan


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str,
                 expected: tuple[str, ...] = ()):
        self.span = span
        self.message = message
        self.expected = expected
        detail = message
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(f"{span}: {detail}")


def _is_ident_start(c: str) -> bool:
    return c.isascii() and (c.isalpha() or c == "_")


def _is_ident_char(c: str) -> bool:
    return c.isascii() and (c.isalnum() or c == "_")


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    """Tokens with spans; whitespace and `//` comments skipped."""
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def span(sl: int, sc: int) -> SourceSpan:
        return SourceSpan(file, sl, sc, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        sl, sc = line, col
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            col += j - i
            i = j
            kind = "kw_" + word if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, span(sl, sc)))
            continue
        if c.isdigit() or (c == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            word = text[i:j]
            col += j - i
            i = j
            tokens.append(Token("int", word, span(sl, sc)))
            continue
        if c == '"':
            j = i + 1
            buf = []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    esc = text[j + 1]
                    buf.append({"n": "\n", "t": "\t"}.get(esc, esc))
                    j += 2
                elif text[j] == "\n":
                    break
                else:
                    buf.append(text[j])
                    j += 1
            if j >= n or text[j] != '"':
                col += j - i
                raise ParseError(span(sl, sc), "unterminated string literal")
            col += j + 1 - i
            i = j + 1
            tokens.append(Token("string", "".join(buf), span(sl, sc)))
            continue
        if text.startswith(":=", i):
            i += 2
            col += 2
            tokens.append(Token("assign", ":=", span(sl, sc)))
            continue
        if text.startswith("=>", i):
            i += 2
            col += 2
            tokens.append(Token("arrow", "=>", span(sl, sc)))
            continue
        if c == ":":
            i += 1
            col += 1
            tokens.append(Token("colon", ":", span(sl, sc)))
            continue
        if c in _PUNCT:
            i += 1
            col += 1
            tokens.append(Token(_PUNCT[c], c, span(sl, sc)))
            continue
        col += 1
        raise ParseError(span(sl, sc), f"illegal character {c!r}")

    tokens.append(Token("eof", "", SourceSpan(file, line, col, line, col)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.span,
                             f"unexpected {tok.kind} {tok.value!r}",
                             expected=(what or kind,))
        return self.next()

    def ident(self) -> str:
        return self.expect("ident", "identifier").value

    # -- statements ---------------------------------------------------------

    def parse_kb(self) -> KnowledgeBase:
        kb = KnowledgeBase()
        dispatch = {
            "kw_basic": self._basic_decl,
            "kw_right": self._right_decl,
            "kw_scenario": self._scen_decl,
            "kw_domain": self._dom_decl,
            "kw_purpose": self._purp_decl,
            "kw_obligation": self._obl_decl,
            "kw_assert": self._assert_stmt,
            "kw_rule": self._rule_stmt,
            "kw_risk": self._risk_decl,
        }
        while self.peek().kind != "eof":
            tok = self.peek()
            handler = dispatch.get(tok.kind)
            if handler is None:
                raise ParseError(tok.span,
                                 f"unexpected {tok.kind} {tok.value!r}",
                                 expected=tuple(sorted(k[3:] for k in dispatch)))
            handler(kb)
        return kb

    def _basic_decl(self, kb: KnowledgeBase) -> None:
        self.expect("kw_basic")
        kb.basic_rights.append(BasicRight(self.ident()))
        while self.accept("comma"):
            kb.basic_rights.append(BasicRight(self.ident()))
        self.expect("semi")

    def _right_decl(self, kb: KnowledgeBase) -> None:
        self.expect("kw_right")
        rid = self.ident()
        definition = None
        if self.accept("assign"):
            definition = self._rexpr()
        self.expect("semi")
        kb.rights.append(FundamentalRight(rid, definition))

    def _rexpr(self) -> RightExpr:
        terms = [self._rterm()]
        while self.accept("pipe"):
            terms.append(self._rterm())
        return terms[0] if len(terms) == 1 else OrExpr(tuple(terms))

    def _rterm(self) -> RightExpr:
        factors = [self._rfactor()]
        while self.accept("amp"):
            factors.append(self._rfactor())
        return factors[0] if len(factors) == 1 else AndExpr(tuple(factors))

    def _rfactor(self) -> RightExpr:
        if self.accept("bang"):
            return NotExpr(self._rfactor())
        if self.accept("lparen"):
            expr = self._rexpr()
            self.expect("rparen")
            return expr
        return RightRef(self.ident())

    def _lit(self) -> FeatureLiteral:
        positive = not self.accept("bang")
        return FeatureLiteral(self.ident(), positive)

    def _scen_decl(self, kb: KnowledgeBase) -> None:
        self.expect("kw_scenario")
        sid = self.ident()
        self.expect("lbrace")
        lits: list[FeatureLiteral] = []
        if self.peek().kind != "rbrace":
            lits.append(self._lit())
            while self.accept("comma"):
                lits.append(self._lit())
        self.expect("rbrace")
        kb.scenarios.append(Scenario(sid, frozenset(lits)))

    def _id_block(self) -> tuple[str, ...]:
        self.expect("lbrace")
        ids = [self.ident()]
        while self.accept("comma"):
            ids.append(self.ident())
        self.expect("rbrace")
        return tuple(ids)

    def _dom_decl(self, kb: KnowledgeBase) -> None:
        self.expect("kw_domain")
        did = self.ident()
        kb.domains.append(DeploymentDomain(did, self._id_block()))

    def _purp_decl(self, kb: KnowledgeBase) -> None:
        self.expect("kw_purpose")
        pid = self.ident()
        kb.purposes.append(Purpose(pid, self._id_block()))

    def _obl_decl(self, kb: KnowledgeBase) -> None:
        self.expect("kw_obligation")
        oid = self.ident()
        text = self.expect("string", "string").value
        self.expect("kw_applies")
        sid = self.ident()
        self.expect("semi")
        kb.obligations.append(Obligation(oid, text, sid))

    def _head(self) -> Head:
        tok = self.peek()
        if (tok.kind == "ident" and tok.value in PRED_KINDS
                and self.peek(1).kind == "lparen"):
            kind = self.next().value
            self.expect("lparen")
            rights = [self.ident()]
            if self.accept("comma"):
                rights.append(self.ident())
            self.expect("rparen")
            if kind in BINARY_PREDS and len(rights) != 2:
                raise ParseError(tok.span, f"{kind} takes two rights")
            if kind not in BINARY_PREDS and len(rights) != 1:
                raise ParseError(tok.span, f"{kind} takes one right")
            return PredHead(kind, tuple(rights))
        rights = [self.ident()]
        while self.accept("gt"):
            rights.append(self.ident())
        return ChainHead(tuple(rights))

    def _assert_stmt(self, kb: KnowledgeBase) -> None:
        self.expect("kw_assert")
        head = self._head()
        self.expect("kw_in")
        sid = self.ident()
        self.expect("semi")
        kb.assertions.append(AssertStmt(sid, head))

    def _rule_stmt(self, kb: KnowledgeBase) -> None:
        self.expect("kw_rule")
        rid = self.ident()
        strength = 0
        if self.accept("lbracket"):
            strength = int(self.expect("int", "integer").value)
            self.expect("rbracket")
        self.expect("colon")
        body: list[FeatureLiteral] = []
        if self.peek().kind != "arrow":
            body.append(self._lit())
            while self.accept("amp"):
                body.append(self._lit())
        self.expect("arrow")
        head = self._head()
        self.expect("semi")
        kb.rules.append(Rule(rid, tuple(body), head, strength))

    def _risk_decl(self, kb: KnowledgeBase) -> None:
        self.expect("kw_risk")
        sid = self.ident()
        self.expect("lbrace")
        fields: dict[str, int] = {}
        while True:
            tok = self.expect("ident", "risk field")
            if tok.value not in RiskAnnotation.FIELDS:
                raise ParseError(tok.span, f"unknown risk field {tok.value!r}",
                                 expected=RiskAnnotation.FIELDS)
            self.expect("colon")
            fields[tok.value] = int(self.expect("int", "integer").value)
            if not self.accept("comma"):
                break
        self.expect("rbrace")
        kb.risk_annotations.append(RiskAnnotation(sid, **fields))


def parse_kb(text: str, file: str = "<input>") -> KnowledgeBase:
    """Parse one `.rights` specification. Raises ParseError on the first
    syntax error; semantic problems are left to validate_kb."""
    return _Parser(tokenize(text, file)).parse_kb()


# ---------------------------------------------------------------------------
# Canonical printer
# ---------------------------------------------------------------------------

def _print_expr(expr: RightExpr, parent: str = "top") -> str:
    if isinstance(expr, RightRef):
        return expr.name
    if isinstance(expr, NotExpr):
        inner = _print_expr(expr.operand, "not")
        return "!" + inner
    # same-operator nesting keeps its parentheses so parsing restores the
    # exact tree
    if isinstance(expr, AndExpr):
        s = " & ".join(_print_expr(e, "and") for e in expr.operands)
        return f"({s})" if parent in ("not", "and") else s
    s = " | ".join(_print_expr(e, "or") for e in expr.operands)
    return f"({s})" if parent in ("and", "not", "or") else s


def _print_lits(lits) -> str:
    return ", ".join(str(l) for l in sorted(lits, key=lambda l: (l.atom, not l.positive)))


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def print_kb(kb: KnowledgeBase) -> str:
    """Canonical rendering; parse_kb(print_kb(kb)) is structurally equal
    to kb."""
    out: list[str] = []
    if kb.basic_rights:
        out.append("basic " + ", ".join(b.id for b in kb.basic_rights) + ";")
    for r in kb.rights:
        if r.definition is None:
            out.append(f"right {r.id};")
        else:
            out.append(f"right {r.id} := {_print_expr(r.definition)};")
    for s in kb.scenarios:
        out.append(f"scenario {s.id} {{ {_print_lits(s.features)} }}")
    for d in kb.domains:
        out.append(f"domain {d.id} {{ {', '.join(d.scenarios)} }}")
    for p in kb.purposes:
        out.append(f"purpose {p.id} {{ {', '.join(p.domains)} }}")
    for o in kb.obligations:
        out.append(f'obligation {o.id} "{_escape(o.text)}" applies {o.applies_to};')
    for a in kb.assertions:
        out.append(f"assert {a.head} in {a.scenario};")
    for rule in kb.rules:
        strength = f" [{rule.strength}]" if rule.strength != 0 else ""
        body = " & ".join(str(l) for l in rule.body)
        sep = " " if body else ""
        out.append(f"rule {rule.id}{strength}: {body}{sep}=> {rule.head};")
    for ann in kb.risk_annotations:
        fields = ", ".join(f"{name}: {getattr(ann, name)}"
                           for name in RiskAnnotation.FIELDS
                           if getattr(ann, name) is not None)
        out.append(f"risk {ann.scenario} {{ {fields} }}")
    return "\n".join(out) + ("\n" if out else "")
