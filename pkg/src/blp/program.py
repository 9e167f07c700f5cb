"""Validated Bayesian logic programs and probabilistic queries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple, Union

from .errors import ValidationError
from .terms import Atom, Clause, check_range_restricted, pred_key_str

PredKey = Tuple[str, int]

DISCRETE = "discrete"
CONTINUOUS = "continuous"
ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class DomainDecl:
    predicate: PredKey
    kind: str
    states: Tuple[str, ...] = ()

    @property
    def is_discrete(self):
        return self.kind == DISCRETE

    @property
    def size(self):
        return len(self.states)

    def index(self, state) -> int:
        return self.states.index(str(state))


@dataclass(frozen=True)
class GaussianEntry:
    """One ``normal(mean, variance)`` entry of a conditional-Gaussian cpd.

    ``terms`` pairs a body position with its coefficient in the mean.
    """

    intercept: float
    terms: Tuple[Tuple[int, float], ...]
    variance: float


@dataclass(frozen=True)
class CpdDecl:
    clause_id: int
    values: Optional[Tuple[float, ...]] = None
    entries: Optional[Tuple[GaussianEntry, ...]] = None

    @property
    def is_gaussian(self):
        return self.entries is not None


@dataclass(frozen=True)
class Program:
    clauses: Tuple[Clause, ...]
    domains: Dict[PredKey, DomainDecl]
    rules: Dict[PredKey, str]
    cpds: Dict[int, CpdDecl]
    closed_world: FrozenSet[PredKey] = frozenset()
    _by_head: Dict[PredKey, Tuple[Clause, ...]] = field(
        default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        index: Dict[PredKey, list] = {}
        for c in self.clauses:
            index.setdefault(c.head.key, []).append(c)
        object.__setattr__(self, "_by_head", {k: tuple(v) for k, v in index.items()})

    def clauses_for(self, key: PredKey) -> Tuple[Clause, ...]:
        return self._by_head.get(key, ())

    def clause(self, clause_id: int) -> Clause:
        return self.clauses[clause_id]

    def domain(self, atom_or_key) -> DomainDecl:
        key = atom_or_key.key if isinstance(atom_or_key, Atom) else atom_or_key
        try:
            return self.domains[key]
        except KeyError:
            raise ValidationError(f"missing domain for {pred_key_str(key)}") from None

    def rule(self, key: PredKey) -> str:
        return self.rules.get(key, "identity")

    def predicates(self):
        keys = dict.fromkeys(self.domains)
        for c in self.clauses:
            keys.setdefault(c.head.key)
            for b in c.body:
                keys.setdefault(b.key)
        return tuple(keys)


Value = Union[str, float]


@dataclass(frozen=True)
class Query:
    atoms: Tuple[Atom, ...]
    evidence: Tuple[Tuple[Atom, Value], ...] = ()

    @property
    def evidence_atoms(self):
        return tuple(a for a, _ in self.evidence)

    def __str__(self):
        text = ", ".join(map(str, self.atoms))
        if self.evidence:
            text += " | " + ", ".join(f"{a}={_fmt_value(v)}" for a, v in self.evidence)
        return text


def _fmt_value(v):
    return format_number(v) if isinstance(v, float) else str(v)


def format_number(x: float) -> str:
    """Shortest round-trip decimal, without a trailing ``.0``."""
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


def validate_program(p: Program) -> Program:
    """Enforce every structural invariant of a program; return it unchanged."""
    if not p.clauses:
        raise ValidationError("program has no clauses")
    for key in p.rules:
        if key not in p.domains:
            raise ValidationError(f"combining rule given for undeclared predicate {pred_key_str(key)}")
    for key in p.closed_world:
        d = p.domain(key)
        if not _is_boolean(d):
            raise ValidationError(f"closed_world predicate {pred_key_str(key)} must have domain [true,false]")
    for c in p.clauses:
        for a in (c.head, *c.body):
            p.domain(a)
        if not check_range_restricted(c):
            raise ValidationError(f"clause {c} is not range-restricted")
        if c.id not in p.cpds:
            raise ValidationError(f"missing cpd for clause {c}")
        _check_cpd(p, c, p.cpds[c.id])
    extra = set(p.cpds) - {c.id for c in p.clauses}
    if extra:
        raise ValidationError(f"cpd given for unknown clause ids {sorted(extra)}")
    return p


def _is_boolean(d: DomainDecl):
    return d.is_discrete and set(d.states) == {"true", "false"} and d.size == 2


def _check_cpd(p: Program, c: Clause, cpd: CpdDecl):
    child = p.domain(c.head)
    body_domains = [p.domain(b) for b in c.body]
    discrete_sizes = [d.size for d in body_domains if d.is_discrete]
    n_configs = math.prod(discrete_sizes)
    if child.is_discrete:
        if any(not d.is_discrete for d in body_domains):
            raise ValidationError(f"discrete head of clause {c} has a continuous body atom")
        if cpd.values is None:
            raise ValidationError(f"clause {c} has a discrete head but a Gaussian cpd")
        expected = child.size * n_configs
        if len(cpd.values) != expected:
            raise ValidationError(
                f"cpd of clause {c} has {len(cpd.values)} values, expected {expected}")
        for v in cpd.values:
            if not math.isfinite(v) or v < 0:
                raise ValidationError(f"cpd of clause {c} has invalid probability {v}")
        for i in range(n_configs):
            row = cpd.values[i * child.size:(i + 1) * child.size]
            if abs(math.fsum(row) - 1.0) > ROW_SUM_TOL:
                raise ValidationError(
                    f"cpd of clause {c}: row {i} sums to {math.fsum(row)!r}, not 1")
    else:
        if cpd.entries is None:
            raise ValidationError(f"clause {c} has a continuous head but a discrete cpd")
        if len(cpd.entries) != n_configs:
            raise ValidationError(
                f"cpd of clause {c} has {len(cpd.entries)} normal entries, expected {n_configs}")
        for e in cpd.entries:
            if not (math.isfinite(e.variance) and e.variance >= 0):
                raise ValidationError(f"cpd of clause {c} has invalid variance {e.variance}")
            if not math.isfinite(e.intercept):
                raise ValidationError(f"cpd of clause {c} has invalid mean {e.intercept}")
            for idx, w in e.terms:
                if not (0 <= idx < len(c.body)) or body_domains[idx].is_discrete:
                    raise ValidationError(
                        f"mean of cpd for clause {c} must reference continuous body atoms only")
                if not math.isfinite(w):
                    raise ValidationError(f"cpd of clause {c} has invalid coefficient {w}")
