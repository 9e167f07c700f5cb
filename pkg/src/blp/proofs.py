"""Top-down proofs: SLD trees and the collapsed solution graphs built from them.

Resolution selects the leftmost atom and tries clauses in program order.
Clause variables are renamed apart before every resolution step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

from .errors import CycleError, ResourceExceeded
from .program import Program
from .terms import Atom, Clause, Renamer, Substitution, apply, compose, is_ground, term_depth, unify

DEFAULT_MAX_DEPTH = 512
DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_TERM_DEPTH = 200


@dataclass(frozen=True)
class Limits:
    max_depth: int = DEFAULT_MAX_DEPTH
    max_nodes: int = DEFAULT_MAX_NODES
    max_term_depth: int = DEFAULT_MAX_TERM_DEPTH


@dataclass
class SldEdge:
    clause_id: int
    clause: Clause  # the renamed-apart copy actually resolved against
    mgu: Substitution
    child: "SldNode"


@dataclass
class SldNode:
    goal: Tuple[Atom, ...]
    depth: int = 0
    edges: List[SldEdge] = field(default_factory=list)

    @property
    def is_success(self):
        return not self.goal

    @property
    def is_failure(self):
        return bool(self.goal) and not self.edges


@dataclass
class SldTree:
    root: SldNode
    size: int

    def successful_paths(self) -> List[List[SldEdge]]:
        """Edge sequences from the root to every empty-goal leaf, in tree order."""
        out = []
        stack = [(self.root, [])]
        while stack:
            node, path = stack.pop()
            if node.is_success:
                out.append(path)
                continue
            for e in reversed(node.edges):
                stack.append((e.child, path + [e]))
        return out

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(e.child for e in reversed(node.edges))


def build_sld_tree(p: Program, goal: Iterable[Atom], limits: Limits = Limits()) -> SldTree:
    """The complete SLD tree of ``goal``; raises ResourceExceeded past ``limits``."""
    goal = tuple(goal)
    if not goal:
        raise ValueError("goal must be non-empty")
    renamer = Renamer()
    root = SldNode(goal, 0)
    size = 1
    stack = [root]
    while stack:
        node = stack.pop()
        if not node.goal:
            continue
        if node.depth >= limits.max_depth:
            raise ResourceExceeded(
                f"SLD tree of {', '.join(map(str, goal))} exceeds depth {limits.max_depth}")
        selected, rest = node.goal[0], node.goal[1:]
        for c in p.clauses_for(selected.key):
            fresh = renamer.fresh(c)
            mgu = unify(selected, fresh.head)
            if mgu is None:
                continue
            child = SldNode(apply(mgu, fresh.body + rest), node.depth + 1)
            if child.goal and max(map(term_depth, child.goal)) > limits.max_term_depth:
                raise ResourceExceeded(
                    f"SLD tree of {', '.join(map(str, goal))} builds terms nested deeper "
                    f"than {limits.max_term_depth}")
            node.edges.append(SldEdge(c.id, fresh, mgu, child))
            size += 1
            if size > limits.max_nodes:
                raise ResourceExceeded(
                    f"SLD tree of {', '.join(map(str, goal))} exceeds {limits.max_nodes} nodes")
        stack.extend(e.child for e in reversed(node.edges))
    return SldTree(root, size)


def answer_substitution(path: List[SldEdge]) -> Substitution:
    """Composition of the edge unifiers along a path."""
    theta: Substitution = {}
    for e in path:
        theta = compose(theta, e.mgu)
    return theta


def format_sld_tree(tree: SldTree) -> str:
    """One node per line, indented by depth; edges show clause id and unifier."""
    lines = []
    stack = [(tree.root, None)]
    while stack:
        node, edge = stack.pop()
        pad = "  " * node.depth
        goal = ", ".join(map(str, node.goal)) if node.goal else "[]"
        label = ""
        if edge is not None:
            mgu = ", ".join(f"{v}/{t}" for v, t in sorted(edge.mgu.items(), key=lambda kv: kv[0].name))
            label = f"  <- clause {edge.clause_id} {{{mgu}}}"
        status = "  success" if node.is_success else ("  fail" if node.is_failure else "")
        lines.append(f"{pad}?- {goal}{label}{status}")
        for e in reversed(node.edges):
            stack.append((e.child, e))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True, order=False)
class AndNode:
    """A ground clause instance: its clause id, grounded head and grounded body."""

    clause_id: int
    head: Atom
    body: Tuple[Atom, ...]


@dataclass
class SolutionGraph:
    # or-node -> its and-children in first-discovery order
    children: Dict[Atom, List[AndNode]] = field(default_factory=dict)

    @property
    def or_nodes(self):
        nodes = dict.fromkeys(self.children)
        for ands in self.children.values():
            for a in ands:
                nodes.update(dict.fromkeys(a.body))
        return tuple(nodes)

    @property
    def and_nodes(self):
        return tuple(a for ands in self.children.values() for a in ands)

    def or_to_and_edges(self):
        return {(o, a) for o, ands in self.children.items() for a in ands}

    def grandchildren(self, atom: Atom):
        return {b for a in self.children.get(atom, ()) for b in a.body}

    def is_empty(self):
        return not self.children

    def add(self, and_node: AndNode):
        ands = self.children.setdefault(and_node.head, [])
        if and_node not in ands:
            ands.append(and_node)
        for b in and_node.body:
            self.children.setdefault(b, [])

    def merge(self, other: "SolutionGraph"):
        for ands in other.children.values():
            for a in ands:
                self.add(a)

    def topological_order(self) -> List[Atom]:
        """Or-nodes with parents (grandchildren) first; raises CycleError on a cycle."""
        order, state = [], {}
        for root in sorted(self.children, key=str):
            if root in state:
                continue
            stack = [(root, iter(sorted(self.grandchildren(root), key=str)))]
            state[root] = 1
            path = [root]
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    stack.pop()
                    path.pop()
                    state[node] = 2
                    order.append(node)
                elif state.get(nxt) == 1:
                    cyc = path[path.index(nxt):] + [nxt]
                    raise CycleError(
                        "solution graph is cyclic: " + " <- ".join(map(str, cyc)), cyc)
                elif nxt not in state:
                    state[nxt] = 1
                    path.append(nxt)
                    stack.append((nxt, iter(sorted(self.grandchildren(nxt), key=str))))
        return order


def atom_solution_graph(p: Program, atom: Atom, limits: Limits = Limits()) -> SolutionGraph:
    tree = build_sld_tree(p, [atom], limits)
    graph = SolutionGraph()
    for path in tree.successful_paths():
        theta = answer_substitution(path)
        for e in path:
            ground = apply(theta, e.clause)
            if not is_ground(ground):
                raise ValueError(f"successful path left {ground} non-ground")
            graph.add(AndNode(e.clause_id, ground.head, ground.body))
    return graph


def solution_graph(p: Program, atoms: Iterable[Atom], limits: Limits = Limits()) -> SolutionGraph:
    """Union of the solution graphs of ground ``atoms`` (empty for unprovable ones)."""
    graph = SolutionGraph()
    for a in atoms:
        if not is_ground(a):
            raise ValueError(f"{a} is not ground")
        graph.merge(atom_solution_graph(p, a, limits))
    graph.topological_order()
    return graph
