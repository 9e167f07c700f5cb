"""Combining rules: merge the cpds of several ground clause instances sharing a head.

A rule is a callable ``rule(child, inputs, domain_of) -> Cpd`` where
``inputs`` is a non-empty list of cpds for ``child`` and ``domain_of`` maps
an atom to its :class:`~blp.program.DomainDecl`. The output must condition
on exactly the union of the input parents; :func:`combine` enforces that.
"""

from __future__ import annotations

import itertools
from types import MappingProxyType
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from .cpd import DiscreteTable, extend_table
from .errors import DomainError, RuleArityError, UnknownRuleError
from .program import DomainDecl
from .terms import Atom

CombiningRule = Callable[[Atom, Sequence, Callable[[Atom], DomainDecl]], object]

MAX_SUM_TOL = 1e-9


def union_parents(inputs) -> tuple:
    """Union of the inputs' parents in lexicographic order of their text."""
    return tuple(sorted({a for cpd in inputs for a in cpd.parents}, key=str))


def identity_rule(child: Atom, inputs, domain_of):
    if len(inputs) != 1:
        raise RuleArityError(
            f"{child} has {len(inputs)} applicable clause instances but its combining rule is identity")
    return inputs[0]


def _default_state(d: DomainDecl) -> int:
    # the state that absorbs leftover mass under max; 'false' for booleans
    if "false" in d.states and "true" in d.states and d.size == 2:
        return d.index("false")
    return d.size - 1


def max_rule(child: Atom, inputs, domain_of):
    """Pointwise maximum of the inputs over the union of their parents.

    Every state except the default one takes the maximum over inputs; the
    default state (``false`` for booleans, else the last declared state)
    takes the remaining mass. For boolean children this makes the child
    true with the largest probability any single input assigns it.
    """
    d = domain_of(child)
    if not d.is_discrete:
        raise DomainError(f"max combining rule needs a discrete domain, {child} is continuous")
    parents = union_parents(inputs)
    sizes = [domain_of(a).size for a in parents]
    stacked = np.stack([extend_table(t, parents, sizes) for t in inputs])
    best = stacked.max(axis=0)
    default = _default_state(d)
    others = [s for s in range(d.size) if s != default]
    mass = best[..., others].sum(axis=-1)
    if (mass > 1.0 + MAX_SUM_TOL).any():
        raise DomainError(f"max of the cpds for {child} puts more than probability 1 on its non-default states")
    out = np.array(best, copy=True)
    out[..., default] = np.clip(1.0 - mass, 0.0, None)
    return DiscreteTable(parents, out)


def _is_boolean(d: DomainDecl):
    return d.is_discrete and d.size == 2 and set(d.states) == {"true", "false"}


def noisy_or_rule(child: Atom, inputs, domain_of):
    """Independent causes: P(child=false | a) is the product of the active causes' inhibitions.

    Each input must be a table over at most one boolean parent. An input with
    no parent is a cause that is always present.
    """
    d = domain_of(child)
    if not _is_boolean(d):
        raise DomainError(f"noisy_or needs a boolean child, {child} has domain {list(d.states)}")
    t_child = d.index("true")
    always = 1.0
    inhibit: Dict[Atom, float] = {}
    for cpd in inputs:
        if not isinstance(cpd, DiscreteTable) or len(cpd.parents) > 1:
            raise DomainError(f"noisy_or inputs for {child} must have at most one parent")
        if not cpd.parents:
            always *= 1.0 - cpd.values[t_child]
            continue
        (parent,) = cpd.parents
        pd = domain_of(parent)
        if not _is_boolean(pd):
            raise DomainError(f"noisy_or parent {parent} of {child} is not boolean")
        q = 1.0 - cpd.values[pd.index("true"), t_child]
        inhibit[parent] = inhibit.get(parent, 1.0) * q
    parents = tuple(sorted(inhibit, key=str))
    true_idx = [domain_of(a).index("true") for a in parents]
    out = np.empty((2,) * len(parents) + (2,))
    for config in itertools.product(range(2), repeat=len(parents)):
        p_false = always
        for a, s, ti in zip(parents, config, true_idx):
            if s == ti:
                p_false *= inhibit[a]
        out[config + (d.index("false"),)] = p_false
        out[config + (t_child,)] = 1.0 - p_false
    return DiscreteTable(parents, out)


DEFAULT_RULES: Mapping[str, CombiningRule] = MappingProxyType({
    "identity": identity_rule,
    "max": max_rule,
    "noisy_or": noisy_or_rule,
})


def make_registry(extra: Optional[Mapping[str, CombiningRule]] = None) -> Mapping[str, CombiningRule]:
    """The built-in rules plus ``extra``, frozen."""
    rules = dict(DEFAULT_RULES)
    rules.update(extra or {})
    return MappingProxyType(rules)


def combine(rule, child: Atom, inputs: List, domain_of, registry: Mapping = DEFAULT_RULES):
    """Apply ``rule`` (a name or callable) to ``inputs``; ``None`` for no inputs."""
    if not inputs:
        return None
    if isinstance(rule, str):
        try:
            rule = registry[rule]
        except KeyError:
            raise UnknownRuleError(f"unknown combining rule {rule!r}") from None
    out = rule(child, list(inputs), domain_of)
    if out is None:
        raise ValueError(f"combining rule returned nothing for {child}")
    if set(out.parents) != {a for cpd in inputs for a in cpd.parents}:
        raise ValueError(f"combined cpd of {child} does not condition on the union of its input parents")
    if isinstance(out, DiscreteTable) != domain_of(child).is_discrete:
        raise ValueError(f"combined cpd of {child} does not match its domain")
    out.check()
    return out
