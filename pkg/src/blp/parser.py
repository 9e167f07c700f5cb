"""Reader and printer for ``.blp`` program text and query strings.

Statements are period-terminated and come in five kinds::

    domain(height/1, continuous, real).
    domain(father/2, discrete, [true, false]).
    combining_rule(parent/2, max).
    closed_world(parent/2).
    height(X) | mother(Y,X), father(Z,X), height(Y), height(Z).
    cpd((height(X) | mother(Y,X), ...), [normal(0.5*height(Y)+0.5*height(Z), 60), ...]).

``%`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import BlpSyntaxError, EvidenceTypeError, NonGroundQueryError, ValidationError
from .program import (
    CONTINUOUS, DISCRETE, CpdDecl, DomainDecl, GaussianEntry, Program, Query,
    format_number, validate_program,
)
from .terms import (
    Atom, Clause, Struct, Var, apply, is_ground, is_variable_name, variant_renaming,
)

RESERVED = {"domain", "combining_rule", "cpd", "closed_world"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<neck>\?-)
  | (?P<punct>[()\[\],|=*+\-/.])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise BlpSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        col = pos - line_start + 1
        if kind == "punct" and value == ".":
            nxt = text[m.end():m.end() + 1]
            if nxt == "" or nxt.isspace() or nxt == "%":
                kind = "end"
        if kind == "quoted":
            kind, value = "name", value[1:-1].replace("\\'", "'")
        if kind != "ws":
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n") if kind == "ws" else 0
        if newlines:
            line += newlines
            line_start = pos + value.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Reader:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return BlpSyntaxError(message, tok.line, tok.column)

    def at(self, text):
        return self.tok.kind in ("punct", "neck") and self.tok.text == text

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r} but found {found!r}")

    def expect_end(self):
        if self.tok.kind != "end":
            found = self.tok.text or "end of input"
            raise self.error(f"expected '.' ending the statement but found {found!r}")
        self.i += 1

    def name(self):
        t = self.tok
        if t.kind != "name" or is_variable_name(t.text):
            raise self.error(f"expected a name but found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def number(self) -> float:
        sign = -1.0 if self.accept("-") else 1.0
        if sign > 0:
            self.accept("+")
        t = self.tok
        if t.kind != "number":
            raise self.error(f"expected a number but found {t.text or 'end of input'!r}")
        self.i += 1
        return sign * float(t.text)

    def term(self):
        t = self.tok
        if t.kind == "number":
            self.i += 1
            return Struct(t.text)
        if t.kind != "name":
            raise self.error(f"expected a term but found {t.text or 'end of input'!r}")
        self.i += 1
        if is_variable_name(t.text):
            return Var(t.text)
        return Struct(t.text, self.arguments())

    def arguments(self):
        if not self.accept("("):
            return ()
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def atom(self) -> Atom:
        t = self.tok
        if t.kind != "name" or is_variable_name(t.text):
            raise self.error(f"expected an atom but found {t.text or 'end of input'!r}")
        self.i += 1
        return Atom(t.text, self.arguments())

    def atoms(self):
        out = [self.atom()]
        while self.accept(","):
            out.append(self.atom())
        return tuple(out)

    def pred_indicator(self):
        name = self.name()
        self.expect("/")
        t = self.tok
        if t.kind != "number" or not t.text.isdigit():
            raise self.error("expected an arity after '/'")
        self.i += 1
        return (name, int(t.text))

    def state(self):
        t = self.tok
        if t.kind in ("name", "number") and not is_variable_name(t.text):
            self.i += 1
            return t.text
        raise self.error(f"expected a state symbol but found {t.text or 'end of input'!r}")


@dataclass
class _RawGaussian:
    intercept: float
    terms: List[Tuple[float, Atom, Token]]
    variance: float


@dataclass
class _RawCpd:
    head: Atom
    body: Tuple[Atom, ...]
    values: Optional[List[float]]
    entries: Optional[List[_RawGaussian]]
    tok: Token


def parse_program(source: str) -> Program:
    """Parse and validate ``.blp`` source text."""
    r = _Reader(source)
    clauses: List[Clause] = []
    domains = {}
    rules = {}
    closed = set()
    raw_cpds: List[_RawCpd] = []
    while r.tok.kind != "eof":
        start = r.tok
        if start.kind == "name" and start.text in RESERVED and r.peek().text == "(":
            kind = start.text
            r.i += 2
            if kind == "domain":
                d = _domain_statement(r)
                if d.predicate in domains:
                    raise ValidationError(f"duplicate domain declaration for {d.predicate[0]}/{d.predicate[1]}")
                domains[d.predicate] = d
            elif kind == "combining_rule":
                key = r.pred_indicator()
                r.expect(",")
                name = r.name()
                if key in rules:
                    raise ValidationError(f"duplicate combining rule for {key[0]}/{key[1]}")
                rules[key] = "identity" if name == "id" else name
            elif kind == "closed_world":
                closed.add(r.pred_indicator())
            else:
                raw_cpds.append(_cpd_statement(r, start))
            r.expect(")")
            r.expect_end()
            continue
        head = r.atom()
        body = r.atoms() if r.accept("|") else ()
        r.expect_end()
        clauses.append(Clause(len(clauses), head, body))
    cpds = _attach_cpds(clauses, raw_cpds)
    return validate_program(Program(tuple(clauses), domains, rules, cpds, frozenset(closed)))


def _domain_statement(r: _Reader) -> DomainDecl:
    key = r.pred_indicator()
    r.expect(",")
    kind_tok = r.tok
    kind = r.name()
    r.expect(",")
    if kind == CONTINUOUS:
        if r.name() != "real":
            raise r.error("continuous domains are written 'real'", kind_tok)
        return DomainDecl(key, CONTINUOUS, ())
    if kind != DISCRETE:
        raise r.error(f"unknown domain kind {kind!r}", kind_tok)
    r.expect("[")
    states = [r.state()]
    while r.accept(","):
        states.append(r.state())
    r.expect("]")
    if len(set(states)) != len(states):
        raise ValidationError(f"duplicate states in domain of {key[0]}/{key[1]}")
    return DomainDecl(key, DISCRETE, tuple(states))


def _cpd_statement(r: _Reader, start: Token) -> _RawCpd:
    if r.accept("("):
        head = r.atom()
        body = r.atoms() if r.accept("|") else ()
        r.expect(")")
    else:
        head = r.atom()
        body = ()
    r.expect(",")
    r.expect("[")
    values, entries = None, None
    if r.tok.kind == "name" and r.tok.text == "normal":
        entries = [_normal(r)]
        while r.accept(","):
            entries.append(_normal(r))
    else:
        values = [r.number()]
        while r.accept(","):
            values.append(r.number())
    r.expect("]")
    return _RawCpd(head, body, values, entries, start)


def _normal(r: _Reader) -> _RawGaussian:
    if r.name() != "normal":
        raise r.error("expected normal(Mean, Variance)")
    r.expect("(")
    intercept, terms = _mean_expression(r)
    r.expect(",")
    variance = r.number()
    r.expect(")")
    return _RawGaussian(intercept, terms, variance)


def _mean_expression(r: _Reader):
    """``c0 + c1*atom1 + ...`` in any order; a bare atom has coefficient 1."""
    intercept = 0.0
    terms = []
    sign = -1.0 if r.accept("-") else 1.0
    if sign > 0:
        r.accept("+")
    while True:
        t = r.tok
        if t.kind == "number":
            value = float(t.text)
            r.i += 1
            if r.accept("*"):
                terms.append((sign * value, r.atom(), t))
            else:
                intercept += sign * value
        elif t.kind == "name" and not is_variable_name(t.text):
            terms.append((sign, r.atom(), t))
        else:
            raise r.error(f"expected a number or atom in mean expression, found {t.text!r}")
        if r.accept("+"):
            sign = -1.0 if r.accept("-") else 1.0
        elif r.accept("-"):
            sign = -1.0
        else:
            return intercept, terms


def _attach_cpds(clauses: List[Clause], raw: List[_RawCpd]):
    cpds = {}
    for rc in raw:
        ref = Clause(-1, rc.head, rc.body)
        for c in clauses:
            if c.id in cpds:
                continue
            renaming = variant_renaming(ref, Clause(-1, c.head, c.body))
            if renaming is not None:
                cpds[c.id] = _resolve_cpd(c, rc, renaming)
                break
        else:
            raise ValidationError(
                f"cpd at line {rc.tok.line} does not match any clause without a cpd: {ref}")
    return cpds


def _resolve_cpd(c: Clause, rc: _RawCpd, renaming) -> CpdDecl:
    if rc.values is not None:
        return CpdDecl(c.id, values=tuple(rc.values))
    entries = []
    for e in rc.entries:
        coeffs = {}
        for coef, atom, tok in e.terms:
            target = apply(renaming, atom)
            try:
                idx = c.body.index(target)
            except ValueError:
                raise ValidationError(
                    f"mean expression atom {atom} (line {tok.line}) does not occur in the body of {c}"
                ) from None
            coeffs[idx] = coeffs.get(idx, 0.0) + coef
        entries.append(GaussianEntry(e.intercept, tuple(coeffs.items()), e.variance))
    return CpdDecl(c.id, entries=tuple(entries))


def parse_query(text: str, program: Optional[Program] = None) -> Query:
    """Parse ``q1, ..., qn`` or ``q1, ..., qn | e1=v1, ..., em=vm``.

    With a program, evidence values are checked against declared domains:
    continuous evidence becomes a float, discrete evidence a state name.
    """
    r = _Reader(text)
    r.accept("?-")
    atoms = r.atoms()
    evidence = []
    if r.accept("|"):
        evidence.append(_evidence_item(r))
        while r.accept(","):
            evidence.append(_evidence_item(r))
    if r.tok.kind == "end":
        r.i += 1
    if r.tok.kind != "eof":
        raise r.error(f"unexpected {r.tok.text!r} after query")
    for a in atoms + tuple(a for a, _ in evidence):
        if not is_ground(a):
            raise NonGroundQueryError(f"query atom {a} is not ground")
    ev_atoms = [a for a, _ in evidence]
    if len(set(ev_atoms)) != len(ev_atoms):
        raise ValidationError("an evidence atom is observed twice")
    if set(ev_atoms) & set(atoms):
        raise ValidationError("an atom is both queried and observed")
    if len(set(atoms)) != len(atoms):
        raise ValidationError("a query atom is repeated")
    if program is not None:
        evidence = [(a, _typed_value(program, a, v)) for a, v in evidence]
    else:
        evidence = [(a, v[1]) for a, v in evidence]
    return Query(atoms, tuple(evidence))


def _evidence_item(r: _Reader):
    a = r.atom()
    r.expect("=")
    if r.tok.kind == "name":
        t = r.tok
        if is_variable_name(t.text):
            raise NonGroundQueryError(f"evidence value {t.text} is a variable")
        r.i += 1
        return a, ("name", t.text)
    negative = r.at("-")
    value = r.number()
    text = r.tokens[r.i - 1].text
    return a, ("number", value, "-" + text if negative else text)


def _typed_value(program: Program, atom: Atom, raw):
    key = atom.key
    if key not in program.domains:
        raise EvidenceTypeError(f"evidence atom {atom} has no declared domain")
    d = program.domains[key]
    if d.is_discrete:
        text = raw[1] if raw[0] == "name" else raw[2]
        if text not in d.states:
            raise EvidenceTypeError(f"value {text!r} is not a state of {atom} (states: {list(d.states)})")
        return text
    if raw[0] != "number" or not math.isfinite(raw[1]):
        raise EvidenceTypeError(f"continuous evidence for {atom} must be a finite real, got {raw[1]!r}")
    return float(raw[1])


def format_program(p: Program) -> str:
    """Render a program as ``.blp`` text that parses back to an equal program."""
    lines = []
    for d in p.domains.values():
        states = "real" if not d.is_discrete else "[" + ",".join(d.states) + "]"
        lines.append(f"domain({d.predicate[0]}/{d.predicate[1]},{d.kind},{states}).")
    for key, rule in p.rules.items():
        lines.append(f"combining_rule({key[0]}/{key[1]},{rule}).")
    for key in sorted(p.closed_world):
        lines.append(f"closed_world({key[0]}/{key[1]}).")
    lines.append("")
    lines.extend(str(c) for c in p.clauses)
    lines.append("")
    for c in p.clauses:
        lines.append(f"cpd({_clause_ref(c)},[{_payload(c, p.cpds[c.id])}]).")
    return "\n".join(lines) + "\n"


def _clause_ref(c: Clause):
    if not c.body:
        return str(c.head)
    return f"({c.head} | {','.join(map(str, c.body))})"


def _payload(c: Clause, cpd: CpdDecl):
    if not cpd.is_gaussian:
        return ",".join(format_number(v) for v in cpd.values)
    return ",".join(
        f"normal({mean_expression_text(e, [str(b) for b in c.body])},{format_number(e.variance)})"
        for e in cpd.entries)


def mean_expression_text(e: GaussianEntry, names) -> str:
    """Linear mean as ``0.5*a+0.5*b+3`` with ``names`` indexed by body position."""
    parts = []
    for idx, w in e.terms:
        if w < 0:
            parts.append(f"-{format_number(-w)}*{names[idx]}")
        else:
            parts.append(f"+{format_number(w)}*{names[idx]}")
    if e.intercept != 0 or not parts:
        parts.append(("+" if e.intercept >= 0 else "-") + format_number(abs(e.intercept)))
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text
