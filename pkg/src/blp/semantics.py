"""Bottom-up semantics: fixpoints, the dependency graph, well-definedness.

Interpretations are ``frozenset``s of ground atoms. Grounding joins body
atoms left to right against an index of the current interpretation; the
least-model loop is semi-naive after its first round.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .errors import ResourceExceeded
from .program import Program
from .terms import Atom, Clause, Substitution, apply, is_ground, match, term_depth

Interpretation = FrozenSet[Atom]

DEFAULT_MAX_ITERATIONS = 10_000
DEFAULT_MAX_ATOMS = 1_000_000
DEFAULT_ANCESTOR_BOUND = 100_000
# deeper terms would overflow the recursive term code
DEFAULT_MAX_TERM_DEPTH = 200


class _Index:
    def __init__(self, atoms: Iterable[Atom] = ()):
        self.by_key: Dict[tuple, List[Atom]] = defaultdict(list)
        for a in atoms:
            self.by_key[a.key].append(a)

    def add(self, a: Atom):
        self.by_key[a.key].append(a)

    def candidates(self, pattern: Atom):
        return self.by_key.get(pattern.key, ())


def _join(body, sources, s: Substitution) -> Iterator[Substitution]:
    """All extensions of ``s`` matching ``body[i]`` against ``sources[i]``."""
    if not body:
        yield s
        return
    first = apply(s, body[0])
    for cand in sources[0].candidates(first):
        s2 = match(first, cand, s)
        if s2 is not None:
            yield from _join(body[1:], sources[1:], s2)


def ground_instances(p: Program, interp: Iterable[Atom], clauses=None
                     ) -> Iterator[Tuple[Clause, Substitution]]:
    """Every (clause, grounding) whose body atoms all lie in ``interp``."""
    index = interp if isinstance(interp, _Index) else _Index(interp)
    for c in p.clauses if clauses is None else clauses:
        for s in _join(c.body, [index] * len(c.body), {}):
            yield c, s


def immediate_consequence(p: Program, i: Iterable[Atom], max_atoms: Optional[int] = None
                          ) -> Interpretation:
    """Heads of all ground clause instances whose bodies hold in ``i``."""
    out: Set[Atom] = set()
    for c, s in ground_instances(p, i):
        head = apply(s, c.head)
        if not is_ground(head):
            raise ValueError(f"clause {c} derived non-ground atom {head}")
        out.add(head)
        if max_atoms is not None and len(out) > max_atoms:
            raise ResourceExceeded(f"immediate consequence exceeds {max_atoms} atoms")
    return frozenset(out)


def least_herbrand_model(p: Program, max_iterations: int = DEFAULT_MAX_ITERATIONS,
                         max_atoms: int = DEFAULT_MAX_ATOMS,
                         max_term_depth: int = DEFAULT_MAX_TERM_DEPTH) -> Interpretation:
    """Least fixpoint of :func:`immediate_consequence` starting from the empty set.

    Raises :class:`ResourceExceeded` when a bound is hit; the exception's
    ``partial`` attribute holds the atoms derived so far (a subset of the
    true model) and ``iterations`` the number of completed rounds. Atoms
    nested deeper than ``max_term_depth`` also stop the computation.
    """
    if max_iterations <= 0 or max_atoms <= 0:
        raise ValueError("bounds must be positive")
    model: Set[Atom] = set()
    index = _Index()
    delta: List[Atom] = []
    for iteration in range(1, max_iterations + 1):
        new: Set[Atom] = set()
        if iteration == 1:
            for c in p.clauses:
                if c.is_fact:
                    new.add(c.head)
        else:
            delta_index = _Index(delta)
            for c in p.clauses:
                n = len(c.body)
                for pos in range(n):
                    sources = [index] * n
                    sources[pos] = delta_index
                    for s in _join(c.body, sources, {}):
                        head = apply(s, c.head)
                        if head not in model:
                            new.add(head)
        new -= model
        if not new:
            return frozenset(model)
        for a in sorted(new, key=str):
            if not is_ground(a):
                raise ValueError(f"derived non-ground atom {a}")
            if term_depth(a) > max_term_depth:
                err = ResourceExceeded(
                    f"derived {a.predicate}/{len(a.args)} atom nested deeper than {max_term_depth}")
                err.partial, err.iterations = frozenset(model), iteration
                raise err
            model.add(a)
            index.add(a)
            if len(model) > max_atoms:
                break
        if len(model) > max_atoms:
            err = ResourceExceeded(f"least Herbrand model exceeds {max_atoms} atoms")
            err.partial, err.iterations = frozenset(model), iteration
            raise err
        delta = [a for a in new if a in model]
    err = ResourceExceeded(f"no fixpoint after {max_iterations} iterations")
    err.partial, err.iterations = frozenset(model), max_iterations
    raise err


@dataclass(frozen=True)
class DependencyGraph:
    nodes: FrozenSet[Atom]
    edges: FrozenSet[Tuple[Atom, Atom]]

    def parents(self, a: Atom) -> FrozenSet[Atom]:
        return self._parent_map().get(a, frozenset())

    def _parent_map(self):
        cached = self.__dict__.get("_pm")
        if cached is None:
            pm = defaultdict(set)
            for x, y in self.edges:
                pm[y].add(x)
            cached = {k: frozenset(v) for k, v in pm.items()}
            object.__setattr__(self, "_pm", cached)
        return cached

    def ancestors(self, atoms: Iterable[Atom], bound: Optional[int] = None) -> Set[Atom]:
        """Atoms with a directed path into ``atoms`` (excluding them unless on a cycle)."""
        pm = self._parent_map()
        seen: Set[Atom] = set()
        stack = list(atoms)
        while stack:
            for par in pm.get(stack.pop(), ()):
                if par not in seen:
                    seen.add(par)
                    if bound is not None and len(seen) > bound:
                        return seen
                    stack.append(par)
        return seen

    def find_cycle(self) -> Optional[Tuple[Atom, ...]]:
        """A directed cycle ``(a1, ..., ak, a1)`` if one exists."""
        children = defaultdict(list)
        for x, y in self.edges:
            children[x].append(y)
        for k in children:
            children[k].sort(key=str)
        WHITE, GREY, BLACK = 0, 1, 2
        color = dict.fromkeys(self.nodes, WHITE)
        for root in sorted(self.nodes, key=str):
            if color[root] != WHITE:
                continue
            path = [root]
            iters = [iter(children.get(root, ()))]
            color[root] = GREY
            while path:
                nxt = next(iters[-1], None)
                if nxt is None:
                    color[path.pop()] = BLACK
                    iters.pop()
                elif color.get(nxt, WHITE) == GREY:
                    start = path.index(nxt)
                    return tuple(path[start:]) + (nxt,)
                elif color.get(nxt, WHITE) == WHITE:
                    color[nxt] = GREY
                    path.append(nxt)
                    iters.append(iter(children.get(nxt, ())))
        return None


def dependency_graph(p: Program, lhm: Iterable[Atom]) -> DependencyGraph:
    """Direct-influence edges over ``lhm``: body atom -> head, per ground instance."""
    nodes = frozenset(lhm)
    edges = set()
    for c, s in ground_instances(p, nodes):
        head = apply(s, c.head)
        if head not in nodes:
            continue
        for b in c.body:
            edges.add((apply(s, b), head))
    return DependencyGraph(nodes, frozenset(edges))


@dataclass(frozen=True)
class Bounds:
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    max_atoms: int = DEFAULT_MAX_ATOMS
    ancestor_bound: int = DEFAULT_ANCESTOR_BOUND
    max_term_depth: int = DEFAULT_MAX_TERM_DEPTH


WELL_DEFINED = "WellDefined"
ILL_DEFINED = "IllDefined"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class WellDefinednessReport:
    status: str
    reason: Optional[str] = None
    witness: tuple = ()
    detail: str = ""

    @property
    def ok(self):
        return self.status == WELL_DEFINED

    def __str__(self):
        if self.status == WELL_DEFINED:
            return WELL_DEFINED
        if self.status == UNDETERMINED:
            return f"{UNDETERMINED}({self.detail})"
        if self.reason == "CycleFound":
            return f"{ILL_DEFINED}(CycleFound: {' -> '.join(map(str, self.witness))})"
        if self.reason == "InfiniteInfluenceSuspected":
            atom, bound = self.witness
            return f"{ILL_DEFINED}(InfiniteInfluenceSuspected: {atom} has more than {bound} ancestors)"
        return f"{ILL_DEFINED}({self.reason})"


def check_well_defined(p: Program, bounds: Bounds = Bounds()) -> WellDefinednessReport:
    """Non-empty model, acyclic dependency graph, finite influence sets.

    When the model cannot be computed within ``bounds`` the partial model is
    still searched for cycles (any cycle there is a real one); otherwise the
    verdict is ``Undetermined``.
    """
    complete = True
    try:
        model = least_herbrand_model(p, bounds.max_iterations, bounds.max_atoms,
                                     bounds.max_term_depth)
    except ResourceExceeded as exc:
        model, complete, hit = exc.partial, False, str(exc)
    if complete and not model:
        return WellDefinednessReport(ILL_DEFINED, "EmptyModel")
    graph = dependency_graph(p, model)
    cycle = graph.find_cycle()
    if cycle is not None:
        return WellDefinednessReport(ILL_DEFINED, "CycleFound", cycle)
    if len(model) > bounds.ancestor_bound:
        for a in sorted(model, key=str):
            if len(graph.ancestors([a], bounds.ancestor_bound)) > bounds.ancestor_bound:
                return WellDefinednessReport(
                    ILL_DEFINED, "InfiniteInfluenceSuspected", (a, bounds.ancestor_bound))
    if not complete:
        return WellDefinednessReport(UNDETERMINED, None, (), hit)
    return WellDefinednessReport(WELL_DEFINED)
