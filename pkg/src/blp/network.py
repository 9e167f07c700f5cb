"""Support networks: the minimal Bayesian network needed to answer a query."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Tuple

import numpy as np

from .combining import DEFAULT_RULES, combine
from .cpd import DiscreteTable, dedupe_gaussian, dedupe_table
from .errors import CycleError, UndefinedVariableError
from .program import DomainDecl, Program
from .proofs import AndNode, Limits, SolutionGraph, atom_solution_graph
from .terms import Atom, is_ground


@dataclass(frozen=True, eq=False)
class SupportNetwork:
    """Ground atoms with their domains and combined cpds.

    ``nodes`` is a topological order (parents first, ties broken by the
    atoms' text), so iterating it is always safe for forward sampling.
    """

    nodes: Tuple[Atom, ...]
    domains: Mapping[Atom, DomainDecl]
    cpds: Mapping[Atom, object]

    def __post_init__(self):
        object.__setattr__(self, "nodes", _topological(self.nodes, self.cpds))

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, atom):
        return atom in self.cpds

    def parents(self, atom: Atom) -> Tuple[Atom, ...]:
        return tuple(self.cpds[atom].parents)

    @property
    def edges(self) -> frozenset:
        return frozenset((par, a) for a in self.nodes for par in self.cpds[a].parents)

    def children(self, atom: Atom):
        return tuple(a for a in self.nodes if atom in self.cpds[a].parents)

    def is_discrete(self, atom: Atom) -> bool:
        return self.domains[atom].is_discrete

    @property
    def all_discrete(self):
        return all(d.is_discrete for d in self.domains.values())

    @property
    def all_continuous(self):
        return not any(d.is_discrete for d in self.domains.values())

    def components(self) -> List[frozenset]:
        """Undirected connected components, each a frozenset of atoms."""
        adj: Dict[Atom, set] = {a: set() for a in self.nodes}
        for x, y in self.edges:
            adj[x].add(y)
            adj[y].add(x)
        seen, out = set(), []
        for a in self.nodes:
            if a in seen:
                continue
            comp, stack = set(), [a]
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(adj[x] - comp)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def subnetwork(self, keep: Iterable[Atom]) -> "SupportNetwork":
        keep = set(keep)
        for a in keep:
            missing = [p for p in self.cpds[a].parents if p not in keep]
            if missing:
                raise ValueError(f"subnetwork is not closed: {a} needs {missing[0]}")
        return SupportNetwork(tuple(a for a in self.nodes if a in keep),
                              {a: self.domains[a] for a in keep},
                              {a: self.cpds[a] for a in keep})

    def check(self):
        """Verify the structural invariants; raises ValueError."""
        for a in self.nodes:
            cpd = self.cpds[a]
            cpd.check()
            for p in cpd.parents:
                if p not in self.cpds:
                    raise ValueError(f"parent {p} of {a} is not a node")
            if isinstance(cpd, DiscreteTable) != self.domains[a].is_discrete:
                raise ValueError(f"cpd kind of {a} does not match its domain")


def _topological(nodes, cpds) -> Tuple[Atom, ...]:
    nodes = tuple(nodes)
    if set(nodes) != set(cpds):
        raise ValueError("node list and cpd map disagree")
    indeg = {a: 0 for a in nodes}
    kids: Dict[Atom, list] = {a: [] for a in nodes}
    for a in nodes:
        for p in cpds[a].parents:
            if p not in indeg:
                raise ValueError(f"parent {p} of {a} is not a node")
            indeg[a] += 1
            kids[p].append(a)
    heap = [(str(a), a) for a in nodes if indeg[a] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, a = heapq.heappop(heap)
        order.append(a)
        for k in kids[a]:
            indeg[k] -= 1
            if indeg[k] == 0:
                heapq.heappush(heap, (str(k), k))
    if len(order) != len(nodes):
        stuck = sorted((a for a in nodes if indeg[a] > 0), key=str)
        raise CycleError("support network is cyclic around " + ", ".join(map(str, stuck[:5])), stuck)
    return tuple(order)


def instance_cpd(p: Program, and_node: AndNode):
    """The clause cpd of ``and_node``'s clause, instantiated on its ground body."""
    decl = p.cpds[and_node.clause_id]
    body = and_node.body
    child = p.domain(and_node.head)
    if child.is_discrete:
        sizes = [p.domain(b).size for b in body]
        values = np.asarray(decl.values, dtype=float).reshape(tuple(sizes) + (child.size,))
        return dedupe_table(body, values)
    disc_pos = [i for i, b in enumerate(body) if p.domain(b).is_discrete]
    cont_pos = [i for i, b in enumerate(body) if not p.domain(b).is_discrete]
    dsizes = tuple(p.domain(body[i]).size for i in disc_pos)
    n = len(decl.entries)
    weights = np.zeros((n, len(cont_pos)))
    intercept = np.empty(n)
    variance = np.empty(n)
    for k, e in enumerate(decl.entries):
        intercept[k] = e.intercept
        variance[k] = e.variance
        for idx, w in e.terms:
            weights[k, cont_pos.index(idx)] += w
    return dedupe_gaussian(
        [body[i] for i in disc_pos], [body[i] for i in cont_pos],
        weights.reshape(dsizes + (len(cont_pos),)), intercept.reshape(dsizes),
        variance.reshape(dsizes))


def closed_world_cpd(d: DomainDecl) -> DiscreteTable:
    """Deterministic ``false`` for an unprovable atom of a closed-world predicate."""
    values = np.zeros(d.size)
    values[d.index("false")] = 1.0
    return DiscreteTable((), values)


def build_support_network(p: Program, atoms: Iterable[Atom], limits: Limits = Limits(),
                          rules: Mapping = DEFAULT_RULES, closed_world: Iterable = ()
                          ) -> SupportNetwork:
    """Support network of ground ``atoms``: union of their solution graphs with combined cpds.

    Unprovable atoms raise :class:`UndefinedVariableError` unless their
    predicate is closed-world (by the program or ``closed_world``), in which
    case they become isolated nodes that are false with certainty.
    """
    cw = set(p.closed_world) | set(closed_world)
    graph = SolutionGraph()
    assumed: Dict[Atom, DiscreteTable] = {}
    for a in dict.fromkeys(atoms):
        if not is_ground(a):
            raise ValueError(f"{a} is not ground")
        g = atom_solution_graph(p, a, limits)
        if g.is_empty():
            if a.key in cw:
                assumed[a] = closed_world_cpd(p.domain(a))
                continue
            raise UndefinedVariableError(
                f"{a} is not a logical consequence of the program; its distribution is undefined")
        graph.merge(g)
    order = graph.topological_order()
    domains = {a: p.domain(a) for a in order}
    cpds = {}
    for a in order:
        inputs = [instance_cpd(p, n) for n in graph.children[a]]
        cpds[a] = combine(p.rule(a.key), a, inputs, domains.__getitem__, rules)
    for a, cpd in assumed.items():
        if a not in cpds:
            domains[a] = p.domain(a)
            cpds[a] = cpd
    return SupportNetwork(tuple(cpds), domains, cpds)


def prune(n: SupportNetwork, query_atoms: Iterable[Atom], evidence_atoms: Iterable[Atom] = ()
          ) -> SupportNetwork:
    """Drop every undirected component that holds no query atom.

    Components holding only evidence are independent of the query, so the
    answer is unchanged.
    """
    query = set(query_atoms)
    missing = [a for a in query if a not in n]
    if missing:
        raise ValueError(f"query atom {missing[0]} is not in the network")
    keep = set()
    for comp in n.components():
        if comp & query:
            keep |= comp
    if len(keep) == len(n):
        return n
    return n.subnetwork(keep)
