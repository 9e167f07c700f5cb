"""Linear-Gaussian networks: joint moments by forward recursion, then conditioning."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple

import numpy as np

from ..cpd import CondGaussian
from ..errors import SingularEvidenceError, UnsupportedModelError
from ..network import SupportNetwork
from ..terms import Atom

SYMMETRY_TOL = 1e-9
# relative size below which a covariance eigenvalue counts as zero
RANK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GaussianBelief:
    variables: Tuple[Atom, ...]
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.covariance, dtype=float).reshape(len(mean), len(mean))
        if len(mean) != len(self.variables):
            raise ValueError("mean length does not match the variables")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    def marginal(self, variables: Sequence[Atom]) -> "GaussianBelief":
        idx = [self.variables.index(v) for v in variables]
        return GaussianBelief(tuple(variables), self.mean[idx], self.covariance[np.ix_(idx, idx)])

    def variance(self, var: Atom) -> float:
        i = self.variables.index(var)
        return float(self.covariance[i, i])

    def mean_of(self, var: Atom) -> float:
        return float(self.mean[self.variables.index(var)])

    def condition(self, evidence: Mapping[Atom, float]) -> "GaussianBelief":
        """Condition on exact values of some variables; the rest remain."""
        return condition(self, evidence)


def joint_moments(order: Sequence[Atom], linear: Mapping[Atom, Tuple]) -> GaussianBelief:
    """Joint moments from ``linear[a] = (parents, weights, intercept, variance)``.

    ``order`` must list parents before children. Covariances are propagated
    row by row: cov(a, x) = sum_k w_k cov(parent_k, x).
    """
    order = tuple(order)
    pos = {a: i for i, a in enumerate(order)}
    n = len(order)
    mean = np.zeros(n)
    cov = np.zeros((n, n))
    for i, a in enumerate(order):
        parents, w, b, var = linear[a]
        idx = [pos[p] for p in parents]
        w = np.asarray(w, dtype=float)
        mean[i] = b + w @ mean[idx] if idx else b
        if idx:
            row = w @ cov[idx, :i]
            cov[i, :i] = row
            cov[:i, i] = row
            cov[i, i] = w @ cov[np.ix_(idx, idx)] @ w + var
        else:
            cov[i, i] = var
    return GaussianBelief(order, mean, cov)


def condition(belief: GaussianBelief, evidence: Mapping[Atom, float]) -> GaussianBelief:
    if not evidence:
        return belief
    ev = [v for v in belief.variables if v in evidence]
    if len(ev) != len(evidence):
        missing = [v for v in evidence if v not in belief.variables]
        raise ValueError(f"evidence atom {missing[0]} is not a variable of the belief")
    rest = [v for v in belief.variables if v not in evidence]
    e_idx = [belief.variables.index(v) for v in ev]
    r_idx = [belief.variables.index(v) for v in rest]
    s_ee = belief.covariance[np.ix_(e_idx, e_idx)]
    s_re = belief.covariance[np.ix_(r_idx, e_idx)]
    resid = np.array([evidence[v] for v in ev], dtype=float) - belief.mean[e_idx]
    vals, vecs = np.linalg.eigh(s_ee)
    scale = max(float(np.abs(vals).max(initial=0.0)), 1.0)
    keep = vals > RANK_TOL * scale
    # the residual must lie in the span of the evidence covariance
    null = vecs[:, ~keep]
    if null.size and np.abs(null.T @ resid).max() > 1e-9 * (1.0 + np.abs(resid).max()):
        raise SingularEvidenceError(
            "evidence contradicts a deterministic linear relation among "
            + ", ".join(map(str, ev)))
    inv = (vecs[:, keep] / vals[keep]) @ vecs[:, keep].T
    gain = s_re @ inv
    mean = belief.mean[r_idx] + gain @ resid
    cov = belief.covariance[np.ix_(r_idx, r_idx)] - gain @ s_re.T
    cov = 0.5 * (cov + cov.T)
    return GaussianBelief(tuple(rest), mean, cov)


def linear_gaussian_params(n: SupportNetwork, config=None):
    """Per continuous node ``(parents, weights, intercept, variance)``.

    ``config`` maps discrete atoms to state indices; it selects the entry of
    each conditional-Gaussian cpd. Without it no node may have discrete parents.
    """
    out = {}
    for a in n.nodes:
        if n.domains[a].is_discrete:
            continue
        cpd = n.cpds[a]
        if not isinstance(cpd, CondGaussian):
            raise UnsupportedModelError(f"{a} has a non-Gaussian continuous cpd")
        if cpd.discrete_parents and config is None:
            raise UnsupportedModelError(f"{a} has discrete parents; the model is not linear-Gaussian")
        key = tuple(config[d] for d in cpd.discrete_parents) if cpd.discrete_parents else ()
        w, b, var = cpd.entry(key)
        out[a] = (cpd.continuous_parents, w, b, var)
    return out


def gaussian_query(n: SupportNetwork, query: Sequence[Atom], evidence=()) -> GaussianBelief:
    """Moments of p(query | evidence) in a network of linear-Gaussian nodes."""
    for a in n.nodes:
        if n.domains[a].is_discrete:
            raise UnsupportedModelError(f"{a} is discrete; the network is not linear-Gaussian")
    ev = {}
    for a, value in evidence:
        if a not in n:
            raise ValueError(f"evidence atom {a} is not in the network")
        ev[a] = float(value)
    query = tuple(query)
    for a in query:
        if a not in n:
            raise ValueError(f"query atom {a} is not in the network")
        if a in ev:
            raise ValueError(f"{a} is both queried and observed")
    joint = joint_moments(n.nodes, linear_gaussian_params(n))
    return condition(joint, ev).marginal(query)
