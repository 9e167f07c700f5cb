"""Query answers and their text and JSON renderings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..program import format_number
from ..terms import Atom
from .factor import Factor
from .gaussian import GaussianBelief


@dataclass(frozen=True, eq=False)
class DiscreteAnswer:
    factor: Factor
    states: Tuple[Tuple[str, ...], ...]

    kind = "discrete"

    @property
    def variables(self):
        return self.factor.variables

    @property
    def probabilities(self) -> np.ndarray:
        return self.factor.table

    def probability(self, assignment: Dict[Atom, str]) -> float:
        idx = tuple(self.states[i].index(str(assignment[v])) for i, v in enumerate(self.variables))
        return float(self.factor.table[idx])

    def marginal(self, variables: Sequence[Atom]) -> "DiscreteAnswer":
        variables = tuple(variables)
        states = tuple(self.states[self.variables.index(v)] for v in variables)
        return DiscreteAnswer(self.factor.marginal(variables), states)

    def rows(self):
        for config in itertools.product(*(range(len(s)) for s in self.states)):
            names = tuple(self.states[i][k] for i, k in enumerate(config))
            yield names, float(self.factor.table[config])

    def to_json(self):
        return {"kind": self.kind, "variables": [str(v) for v in self.variables],
                "states": [list(s) for s in self.states],
                "probabilities": [float(x) for x in self.factor.table.reshape(-1)]}

    def format(self) -> str:
        lines = []
        for names, prob in self.rows():
            lhs = ", ".join(f"{v}={s}" for v, s in zip(self.variables, names))
            lines.append(f"p({lhs}) = {format_number(prob)}")
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class GaussianAnswer:
    belief: GaussianBelief

    kind = "gaussian"

    @property
    def variables(self):
        return self.belief.variables

    @property
    def mean(self):
        return self.belief.mean

    @property
    def covariance(self):
        return self.belief.covariance

    def marginal(self, variables: Sequence[Atom]) -> "GaussianAnswer":
        return GaussianAnswer(self.belief.marginal(variables))

    def to_json(self):
        return {"kind": self.kind, "variables": [str(v) for v in self.variables],
                "mean": [float(x) for x in self.belief.mean],
                "covariance": [[float(x) for x in row] for row in self.belief.covariance]}

    def format(self) -> str:
        lines = []
        for i, v in enumerate(self.variables):
            mu = format_number(self.belief.mean[i])
            var = format_number(self.belief.covariance[i, i])
            lines.append(f"{v} ~ N(mean={mu}, variance={var})")
        if len(self.variables) > 1:
            for i, j in itertools.combinations(range(len(self.variables)), 2):
                c = format_number(self.belief.covariance[i, j])
                lines.append(f"cov({self.variables[i]}, {self.variables[j]}) = {c}")
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class MixtureComponent:
    assignment: Tuple[str, ...]
    weight: float
    belief: GaussianBelief


@dataclass(frozen=True, eq=False)
class MixtureAnswer:
    """Weighted Gaussians over the continuous query atoms, one per discrete state."""

    discrete_variables: Tuple[Atom, ...]
    discrete_states: Tuple[Tuple[str, ...], ...]
    continuous_variables: Tuple[Atom, ...]
    components: Tuple[MixtureComponent, ...]

    kind = "mixture"

    @property
    def variables(self):
        return self.discrete_variables + self.continuous_variables

    @property
    def weights(self):
        return np.array([c.weight for c in self.components])

    def discrete_marginal(self) -> DiscreteAnswer:
        table = np.zeros([len(s) for s in self.discrete_states])
        for c in self.components:
            idx = tuple(s.index(x) for s, x in zip(self.discrete_states, c.assignment))
            table[idx] += c.weight
        return DiscreteAnswer(Factor(self.discrete_variables, table), self.discrete_states)

    def marginal(self, variables: Sequence[Atom]) -> "MixtureAnswer":
        """Project onto a subset; components keep their weights and are not merged."""
        disc = tuple(v for v in variables if v in self.discrete_variables)
        cont = tuple(v for v in variables if v in self.continuous_variables)
        if len(disc) + len(cont) != len(tuple(variables)):
            raise ValueError("marginal variables must come from the answer")
        pick = [self.discrete_variables.index(v) for v in disc]
        comps = tuple(MixtureComponent(tuple(c.assignment[i] for i in pick), c.weight, c.belief.marginal(cont))
                      for c in self.components)
        return MixtureAnswer(disc, tuple(self.discrete_states[i] for i in pick), cont, comps)

    def moments(self) -> GaussianBelief:
        """Overall mean and covariance of the continuous query atoms."""
        w = self.weights
        means = np.array([c.belief.mean for c in self.components])
        mean = w @ means
        cov = np.zeros((len(mean), len(mean)))
        for c, wk in zip(self.components, w):
            d = c.belief.mean - mean
            cov += wk * (c.belief.covariance + np.outer(d, d))
        return GaussianBelief(self.continuous_variables, mean, cov)

    def to_json(self):
        return {"kind": self.kind,
                "discrete_variables": [str(v) for v in self.discrete_variables],
                "discrete_states": [list(s) for s in self.discrete_states],
                "continuous_variables": [str(v) for v in self.continuous_variables],
                "components": [
                    {"assignment": list(c.assignment), "weight": float(c.weight),
                     "mean": [float(x) for x in c.belief.mean],
                     "covariance": [[float(x) for x in row] for row in c.belief.covariance]}
                    for c in self.components]}

    def format(self) -> str:
        lines = []
        for c in self.components:
            cond = ", ".join(f"{v}={s}" for v, s in zip(self.discrete_variables, c.assignment))
            head = f"weight {format_number(c.weight)}" + (f" [{cond}]" if cond else "")
            lines.append(head + ":")
            lines.extend("  " + line for line in GaussianAnswer(c.belief).format().splitlines())
        return "\n".join(lines)


def answer_from_json(data):
    """Rebuild an answer from :meth:`to_json` output; atoms come back as text."""
    kind = data["kind"]
    if kind == "discrete":
        shape = [len(s) for s in data["states"]]
        f = Factor(tuple(data["variables"]), np.array(data["probabilities"]).reshape(shape))
        return DiscreteAnswer(f, tuple(tuple(s) for s in data["states"]))
    if kind == "gaussian":
        return GaussianAnswer(GaussianBelief(tuple(data["variables"]), data["mean"], data["covariance"]))
    if kind == "mixture":
        cont = tuple(data["continuous_variables"])
        comps: List[MixtureComponent] = [
            MixtureComponent(tuple(c["assignment"]), c["weight"],
                             GaussianBelief(cont, c["mean"], c["covariance"]))
            for c in data["components"]]
        states = tuple(tuple(s) for s in data["discrete_states"])
        return MixtureAnswer(tuple(data["discrete_variables"]), states, cont, tuple(comps))
    raise ValueError(f"unknown answer kind {kind!r}")
