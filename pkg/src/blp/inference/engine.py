"""From a parsed query to an answer: build, prune, dispatch."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

from ..combining import DEFAULT_RULES
from ..errors import UnsupportedModelError
from ..network import SupportNetwork, build_support_network, prune
from ..program import Program, Query
from ..proofs import Limits
from .answers import DiscreteAnswer, GaussianAnswer
from .factor import variable_elimination
from .gaussian import gaussian_query
from .mixed import DEFAULT_CONFIG_BOUND, mixed_query

ENGINES = ("auto", "ve", "gaussian")


@dataclass(frozen=True)
class QueryOptions:
    engine: str = "auto"
    prune: bool = True
    limits: Limits = Limits()
    closed_world: Tuple = ()
    rules: Mapping = field(default_factory=lambda: DEFAULT_RULES)
    config_bound: int = DEFAULT_CONFIG_BOUND

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {', '.join(ENGINES)}, not {self.engine!r}")


def query_network(p: Program, q: Query, options: Optional[QueryOptions] = None) -> SupportNetwork:
    """Support network of the query and evidence atoms, pruned unless disabled."""
    options = options or QueryOptions()
    atoms = tuple(q.atoms) + q.evidence_atoms
    n = build_support_network(p, atoms, options.limits, options.rules, options.closed_world)
    if options.prune:
        n = prune(n, q.atoms, q.evidence_atoms)
    return n


def answer_network(n: SupportNetwork, q: Query, options: Optional[QueryOptions] = None):
    options = options or QueryOptions()
    evidence = [(a, v) for a, v in q.evidence if a in n]
    engine = options.engine
    if engine == "auto":
        engine = "ve" if n.all_discrete else ("gaussian" if n.all_continuous else "mixed")
    if engine == "ve":
        if not n.all_discrete:
            raise UnsupportedModelError("variable elimination needs an all-discrete network")
        factor = variable_elimination(n, q.atoms, evidence)
        return DiscreteAnswer(factor, tuple(n.domains[a].states for a in q.atoms))
    if engine == "gaussian":
        if not n.all_continuous:
            raise UnsupportedModelError("the Gaussian engine needs an all-continuous network")
        return GaussianAnswer(gaussian_query(n, q.atoms, evidence))
    return mixed_query(n, q.atoms, evidence, options.config_bound)


def answer_query(p: Program, q: Query, options: Optional[QueryOptions] = None, **overrides):
    """Answer ``q`` against ``p``.

    Keyword overrides are applied to ``options``, e.g.
    ``answer_query(p, q, engine="ve", prune=False)``.
    """
    options = options or QueryOptions()
    if overrides:
        options = QueryOptions(**{**options.__dict__, **overrides})
    return answer_network(query_network(p, q, options), q, options)
