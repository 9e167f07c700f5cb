"""Logical terms, atoms, clauses, substitutions and unification.

Substitutions are plain dicts mapping :class:`Var` to terms. Every function
here treats them as values and never mutates an argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Struct:
    """A compound term; a constant is a ``Struct`` with no arguments."""

    functor: str
    args: Tuple["Term", ...] = ()

    def __str__(self):
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(map(str, self.args))})"


Term = Union[Var, Struct]


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: Tuple[Term, ...] = ()

    @property
    def key(self) -> Tuple[str, int]:
        """The predicate/arity pair identifying the Bayesian predicate."""
        return (self.predicate, len(self.args))

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"


@dataclass(frozen=True, slots=True)
class Clause:
    id: int
    head: Atom
    body: Tuple[Atom, ...] = ()

    @property
    def is_fact(self):
        return not self.body

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} | {', '.join(map(str, self.body))}."


Substitution = Dict[Var, Term]
Expr = Union[Var, Struct, Atom, Clause, tuple]


def is_variable_name(name: str) -> bool:
    return bool(name) and (name[0].isupper() or name[0] == "_")


def pred_key_str(key: Tuple[str, int]) -> str:
    return f"{key[0]}/{key[1]}"


def iter_vars(e: Expr) -> Iterator[Var]:
    """Yield variable occurrences left to right, depth first."""
    if isinstance(e, Var):
        yield e
    elif isinstance(e, (Struct, Atom)):
        for a in e.args:
            yield from iter_vars(a)
    elif isinstance(e, Clause):
        yield from iter_vars(e.head)
        for b in e.body:
            yield from iter_vars(b)
    else:
        for x in e:
            yield from iter_vars(x)


def variables(e: Expr) -> Tuple[Var, ...]:
    """Distinct variables of ``e`` in order of first occurrence."""
    return tuple(dict.fromkeys(iter_vars(e)))


def term_depth(e) -> int:
    """Nesting depth of a term or atom (constants and variables have depth 0)."""
    best = 0
    stack = [(e, 0)]
    while stack:
        t, d = stack.pop()
        if isinstance(t, (Struct, Atom)):
            if isinstance(t, Struct) and t.args:
                d += 1
            best = max(best, d)
            stack.extend((a, d) for a in t.args)
    return best


def is_ground(e: Expr) -> bool:
    return next(iter_vars(e), None) is None


def apply(s: Substitution, e):
    """Simultaneously replace every bound variable of ``e`` by its image."""
    if not s:
        return e
    if isinstance(e, Var):
        return s.get(e, e)
    if isinstance(e, Struct):
        if not e.args:
            return e
        return Struct(e.functor, tuple(apply(s, a) for a in e.args))
    if isinstance(e, Atom):
        return Atom(e.predicate, tuple(apply(s, a) for a in e.args))
    if isinstance(e, Clause):
        return Clause(e.id, apply(s, e.head), tuple(apply(s, b) for b in e.body))
    return tuple(apply(s, x) for x in e)


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """Return the substitution equivalent to applying ``s1`` then ``s2``."""
    out = {}
    for v, t in s1.items():
        t2 = apply(s2, t)
        if t2 != v:
            out[v] = t2
    for v, t in s2.items():
        if v not in s1:
            out[v] = t
    return out


def _walk(t, bindings):
    while isinstance(t, Var) and t in bindings:
        t = bindings[t]
    return t


def _occurs(v, t, bindings):
    t = _walk(t, bindings)
    if t == v:
        return True
    if isinstance(t, Struct):
        return any(_occurs(v, a, bindings) for a in t.args)
    return False


def _resolve(t, bindings):
    t = _walk(t, bindings)
    if isinstance(t, Struct) and t.args:
        return Struct(t.functor, tuple(_resolve(a, bindings) for a in t.args))
    return t


def unify(a, b) -> Optional[Substitution]:
    """Most general unifier of two atoms (or terms), or ``None``.

    Arguments are processed left to right and the occurs check is always on,
    so ``p(X)`` and ``p(f(X))`` do not unify. The result is idempotent.
    """
    if isinstance(a, Atom) or isinstance(b, Atom):
        if not (isinstance(a, Atom) and isinstance(b, Atom)) or a.key != b.key:
            return None
        stack = list(zip(a.args, b.args))
    else:
        stack = [(a, b)]
    stack.reverse()
    bindings: Dict[Var, Term] = {}
    while stack:
        x, y = stack.pop()
        x = _walk(x, bindings)
        y = _walk(y, bindings)
        if x == y:
            continue
        if isinstance(x, Var):
            if _occurs(x, y, bindings):
                return None
            bindings[x] = y
        elif isinstance(y, Var):
            if _occurs(y, x, bindings):
                return None
            bindings[y] = x
        else:
            if x.functor != y.functor or len(x.args) != len(y.args):
                return None
            stack.extend(reversed(list(zip(x.args, y.args))))
    return {v: _resolve(t, bindings) for v, t in bindings.items()}


def match(pattern, ground, s: Optional[Substitution] = None) -> Optional[Substitution]:
    """One-way matching of ``pattern`` onto a ground atom or term.

    Extends ``s`` (never mutated). Cheaper than :func:`unify` for joins.
    """
    out = dict(s) if s else {}
    stack = [(pattern, ground)]
    if isinstance(pattern, Atom):
        if not isinstance(ground, Atom) or pattern.key != ground.key:
            return None
        stack = list(zip(pattern.args, ground.args))
    while stack:
        p, g = stack.pop()
        if isinstance(p, Var):
            bound = out.get(p)
            if bound is None:
                out[p] = g
            elif bound != g:
                return None
        elif isinstance(g, Var) or p.functor != g.functor or len(p.args) != len(g.args):
            return None
        else:
            stack.extend(zip(p.args, g.args))
    return out


def check_range_restricted(c: Clause) -> bool:
    """True iff every head variable also occurs in the body."""
    return set(iter_vars(c.head)) <= set(iter_vars(c.body))


class Renamer:
    """Produces clause copies with fresh numbered variables."""

    def __init__(self, prefix="_G"):
        self.prefix = prefix
        self._counter = count()

    def fresh(self, c: Clause) -> Clause:
        vs = variables(c)
        if not vs:
            return c
        n = next(self._counter)
        return apply({v: Var(f"{self.prefix}{n}_{v.name}") for v in vs}, c)


def is_variant(a: Expr, b: Expr) -> bool:
    """True when ``a`` and ``b`` are equal up to a bijective variable renaming."""
    s = _variant_map(a, b)
    return s is not None


def _variant_map(a, b):
    fwd: Dict[Var, Var] = {}
    bwd: Dict[Var, Var] = {}

    def walk(x, y):
        if isinstance(x, Var) or isinstance(y, Var):
            if not (isinstance(x, Var) and isinstance(y, Var)):
                return False
            if fwd.setdefault(x, y) != y or bwd.setdefault(y, x) != x:
                return False
            return True
        if type(x) is not type(y):
            return False
        if isinstance(x, Struct):
            return x.functor == y.functor and len(x.args) == len(y.args) and all(
                walk(p, q) for p, q in zip(x.args, y.args))
        if isinstance(x, Atom):
            return x.key == y.key and all(walk(p, q) for p, q in zip(x.args, y.args))
        if isinstance(x, Clause):
            return len(x.body) == len(y.body) and walk(x.head, y.head) and all(
                walk(p, q) for p, q in zip(x.body, y.body))
        return len(x) == len(y) and all(walk(p, q) for p, q in zip(x, y))

    return fwd if walk(a, b) else None


def variant_renaming(a: Expr, b: Expr) -> Optional[Dict[Var, Var]]:
    """The variable bijection mapping ``a`` onto ``b``, if they are variants."""
    return _variant_map(a, b)


def sort_atoms(atoms: Iterable[Atom]):
    """Atoms in lexicographic order of their canonical text."""
    return sorted(atoms, key=str)
