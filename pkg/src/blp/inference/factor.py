"""Discrete factors, the brute-force joint, and variable elimination."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ..cpd import DiscreteTable
from ..errors import InconsistentEvidenceError, ResourceExceeded
from ..network import SupportNetwork
from ..terms import Atom

NORMALIZER_FLOOR = 1e-300
DEFAULT_JOINT_BOUND = 2 ** 20


@dataclass(frozen=True, eq=False)
class Factor:
    """Non-negative table over discrete variables, one axis per variable."""

    variables: Tuple[Atom, ...]
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "table", np.asarray(self.table, dtype=float))
        if self.table.ndim != len(self.variables):
            raise ValueError("factor rank does not match its variables")

    @property
    def cards(self):
        return self.table.shape

    def total(self) -> float:
        return float(self.table.sum())

    def normalized(self) -> "Factor":
        z = self.total()
        if not z > NORMALIZER_FLOOR:
            raise InconsistentEvidenceError("evidence has probability zero")
        return Factor(self.variables, self.table / z)

    def transpose(self, variables: Sequence[Atom]) -> "Factor":
        perm = [self.variables.index(v) for v in variables]
        return Factor(tuple(variables), np.transpose(self.table, perm))

    def multiply(self, other: "Factor") -> "Factor":
        out_vars = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return Factor(out_vars, self._aligned(out_vars) * other._aligned(out_vars))

    def _aligned(self, out_vars):
        # broadcastable view of the table over out_vars
        present = [v for v in out_vars if v in self.variables]
        arr = np.transpose(self.table, [self.variables.index(v) for v in present])
        shape = [self.table.shape[self.variables.index(v)] if v in self.variables else 1
                 for v in out_vars]
        return arr.reshape(shape)

    def sum_out(self, var: Atom) -> "Factor":
        i = self.variables.index(var)
        return Factor(self.variables[:i] + self.variables[i + 1:], self.table.sum(axis=i))

    def reduce(self, var: Atom, state: int) -> "Factor":
        i = self.variables.index(var)
        return Factor(self.variables[:i] + self.variables[i + 1:], np.take(self.table, state, axis=i))

    def marginal(self, variables: Sequence[Atom]) -> "Factor":
        f = self
        for v in self.variables:
            if v not in variables:
                f = f.sum_out(v)
        return f.transpose(variables)


def cpd_factor(atom: Atom, cpd: DiscreteTable) -> Factor:
    return Factor(cpd.parents + (atom,), cpd.values)


def _require_discrete(n: SupportNetwork):
    for a in n.nodes:
        if not n.domains[a].is_discrete:
            raise TypeError(f"{a} is continuous; this operation needs an all-discrete network")


def enumerate_joint(n: SupportNetwork, bound: int = DEFAULT_JOINT_BOUND) -> Factor:
    """The full joint, one product of cpd entries per configuration.

    Deliberately naive so that it can serve as an oracle for the faster code.
    """
    _require_discrete(n)
    nodes = n.nodes
    sizes = [n.domains[a].size for a in nodes]
    total = math.prod(sizes)
    if total > bound:
        raise ResourceExceeded(f"joint has {total} states, above the bound {bound}")
    pos = {a: i for i, a in enumerate(nodes)}
    lookups = [(n.cpds[a].values, [pos[par] for par in n.cpds[a].parents], i)
               for i, a in enumerate(nodes)]
    table = np.empty(total)
    for k, config in enumerate(itertools.product(*map(range, sizes))):
        prob = 1.0
        for values, par_idx, i in lookups:
            prob *= values[tuple(config[j] for j in par_idx) + (config[i],)]
            if prob == 0.0:
                break
        table[k] = prob
    return Factor(nodes, table.reshape(sizes))


def _state_index(n: SupportNetwork, atom: Atom, state) -> int:
    if isinstance(state, (int, np.integer)) and not isinstance(state, bool):
        if not 0 <= state < n.domains[atom].size:
            raise ValueError(f"state index {state} out of range for {atom}")
        return int(state)
    try:
        return n.domains[atom].index(state)
    except ValueError:
        raise ValueError(f"{state!r} is not a state of {atom}") from None


def elimination_order(factors: List[Factor], eliminate: Iterable[Atom]) -> List[Atom]:
    """Min-degree order over the factors' interaction graph, ties broken by atom text."""
    remaining = set(eliminate)
    adj: Dict[Atom, set] = {v: set() for v in remaining}
    for f in factors:
        for v in f.variables:
            if v in adj:
                adj[v].update(u for u in f.variables if u != v)
    order = []
    while remaining:
        v = min(remaining, key=lambda x: (len(adj[x]), str(x)))
        order.append(v)
        remaining.discard(v)
        nbrs = adj.pop(v)
        for u in nbrs:
            if u in adj:
                adj[u].discard(v)
                adj[u].update(w for w in nbrs if w != u)
    return order


def variable_elimination(n: SupportNetwork, query: Sequence[Atom], evidence=()) -> Factor:
    """p(query | evidence) by summing out every other variable.

    ``evidence`` pairs atoms with a state name or a state index.
    """
    _require_discrete(n)
    query = tuple(query)
    ev = {}
    for a, state in evidence:
        if a not in n:
            raise ValueError(f"evidence atom {a} is not in the network")
        ev[a] = _state_index(n, a, state)
    for a in query:
        if a not in n:
            raise ValueError(f"query atom {a} is not in the network")
        if a in ev:
            raise ValueError(f"{a} is both queried and observed")
    factors = []
    for a in n.nodes:
        f = cpd_factor(a, n.cpds[a])
        for v, s in ev.items():
            if v in f.variables:
                f = f.reduce(v, s)
        factors.append(f)
    hidden = [a for a in n.nodes if a not in ev and a not in query]
    for v in elimination_order(factors, hidden):
        touching = [f for f in factors if v in f.variables]
        factors = [f for f in factors if v not in f.variables]
        prod = touching[0]
        for f in touching[1:]:
            prod = prod.multiply(f)
        factors.append(prod.sum_out(v))
    result = Factor((), np.array(1.0))
    for f in factors:
        result = result.multiply(f)
    return result.transpose(query).normalized()
