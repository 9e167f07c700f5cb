"""Conditional-Gaussian networks by enumerating discrete configurations.

Given a full assignment of the discrete nodes, the continuous nodes form a
linear-Gaussian network. Each configuration with non-zero probability
becomes one mixture component, weighted by its probability times the
density of any continuous evidence.
"""

from __future__ import annotations

import math
from typing import Dict, List, Sequence

import numpy as np

from ..errors import InconsistentEvidenceError, ResourceExceeded, SingularEvidenceError
from ..network import SupportNetwork
from ..terms import Atom
from .answers import DiscreteAnswer, GaussianAnswer, MixtureAnswer, MixtureComponent
from .factor import Factor
from .gaussian import RANK_TOL, condition, joint_moments, linear_gaussian_params

DEFAULT_CONFIG_BOUND = 2 ** 16


def discrete_configurations(n: SupportNetwork, evidence: Dict[Atom, int],
                            bound: int = DEFAULT_CONFIG_BOUND):
    """Yield ``(config, probability)`` for every discrete configuration consistent
    with ``evidence`` and of non-zero probability (evidence included in the product)."""
    nodes = [a for a in n.nodes if n.domains[a].is_discrete]
    count = 0
    stack = [(0, {}, 1.0)]
    while stack:
        depth, config, prob = stack.pop()
        if depth == len(nodes):
            count += 1
            if count > bound:
                raise ResourceExceeded(f"more than {bound} discrete configurations to enumerate")
            yield config, prob
            continue
        a = nodes[depth]
        cpd = n.cpds[a]
        row = cpd.values[tuple(config[p] for p in cpd.parents)]
        states = [evidence[a]] if a in evidence else range(len(row))
        for s in reversed(list(states)):
            if row[s] > 0.0:
                stack.append((depth + 1, {**config, a: s}, prob * float(row[s])))


def _log_density(x, mean, cov):
    vals, vecs = np.linalg.eigh(cov)
    scale = max(float(np.abs(vals).max(initial=0.0)), 1.0)
    if (vals <= RANK_TOL * scale).any():
        raise SingularEvidenceError("continuous evidence has a degenerate density in the mixed model")
    z = vecs.T @ (x - mean)
    return -0.5 * (float(np.sum(z * z / vals)) + float(np.sum(np.log(vals))) + len(x) * math.log(2 * math.pi))


def mixed_query(n: SupportNetwork, query: Sequence[Atom], evidence=(),
                bound: int = DEFAULT_CONFIG_BOUND):
    """Answer a query on a network mixing discrete and continuous nodes."""
    query = tuple(query)
    d_ev: Dict[Atom, int] = {}
    c_ev: Dict[Atom, float] = {}
    for a, value in evidence:
        if a not in n:
            raise ValueError(f"evidence atom {a} is not in the network")
        if n.domains[a].is_discrete:
            d_ev[a] = n.domains[a].index(value) if isinstance(value, str) else int(value)
        else:
            c_ev[a] = float(value)
    for a in query:
        if a not in n:
            raise ValueError(f"query atom {a} is not in the network")
        if a in d_ev or a in c_ev:
            raise ValueError(f"{a} is both queried and observed")
    q_disc = tuple(a for a in query if n.domains[a].is_discrete)
    q_cont = tuple(a for a in query if not n.domains[a].is_discrete)
    continuous = [a for a in n.nodes if not n.domains[a].is_discrete]
    ev_atoms = [a for a in continuous if a in c_ev]
    x_ev = np.array([c_ev[a] for a in ev_atoms])

    raw = []  # (assignment, log weight, belief)
    for config, prob in discrete_configurations(n, d_ev, bound):
        logw = math.log(prob)
        belief = None
        if continuous:
            joint = joint_moments(continuous, linear_gaussian_params(n, config))
            if ev_atoms:
                marg = joint.marginal(ev_atoms)
                logw += _log_density(x_ev, marg.mean, marg.covariance)
                joint = condition(joint, c_ev)
            belief = joint.marginal(q_cont)
        raw.append((tuple(config[a] for a in q_disc), logw, belief))
    if not raw:
        raise InconsistentEvidenceError("evidence has probability zero")
    logs = np.array([r[1] for r in raw])
    top = logs.max()
    weights = np.exp(logs - top)
    z = weights.sum()
    if not np.isfinite(top):
        raise InconsistentEvidenceError("evidence has probability zero")
    # weights are relative, so a tiny evidence density is not an error here
    weights = weights / z

    states = tuple(n.domains[a].states for a in q_disc)
    if not q_cont:
        table = np.zeros([len(s) for s in states])
        for (assign, _, _), w in zip(raw, weights):
            table[assign] += w
        return DiscreteAnswer(Factor(q_disc, table), states)

    # merge components that share the discrete query state and the moments
    merged: List[list] = []
    for (assign, _, belief), w in zip(raw, weights):
        for m in merged:
            if (m[0] == assign and np.array_equal(m[2].mean, belief.mean)
                    and np.array_equal(m[2].covariance, belief.covariance)):
                m[1] += w
                break
        else:
            merged.append([assign, w, belief])
    if not q_disc and len(merged) == 1:
        return GaussianAnswer(merged[0][2])
    comps = tuple(
        MixtureComponent(tuple(states[i][k] for i, k in enumerate(assign)), float(w), belief)
        for assign, w, belief in merged)
    return MixtureAnswer(q_disc, states, q_cont, comps)
