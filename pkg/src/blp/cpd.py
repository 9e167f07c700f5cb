"""Conditional probability densities attached to network nodes.

Discrete tables are numpy arrays of shape ``(*parent_sizes, child_size)``,
so the flat C-order layout has the child state varying fastest and the first
parent slowest. Conditional-Gaussian cpds keep one linear-Gaussian entry per
joint state of their discrete parents.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .terms import Atom

ROW_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DiscreteTable:
    parents: Tuple[Atom, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "parents", tuple(self.parents))
        if values.ndim != len(self.parents) + 1:
            raise ValueError(f"table of rank {values.ndim} for {len(self.parents)} parents")

    @property
    def child_size(self):
        return self.values.shape[-1]

    @property
    def parent_sizes(self):
        return self.values.shape[:-1]

    def check(self):
        if len(set(self.parents)) != len(self.parents):
            raise ValueError("duplicate parents")
        if (self.values < 0).any() or not np.isfinite(self.values).all():
            raise ValueError("negative or non-finite probability")
        sums = self.values.sum(axis=-1)
        if np.abs(sums - 1.0).max(initial=0.0) > ROW_TOL:
            raise ValueError("table rows do not sum to 1")

    def same_as(self, other) -> bool:
        return (isinstance(other, DiscreteTable) and self.parents == other.parents
                and self.values.shape == other.values.shape
                and np.array_equal(self.values, other.values))


@dataclass(frozen=True, eq=False)
class CondGaussian:
    """Gaussian child whose mean is linear in its continuous parents.

    ``weights`` has shape ``(*discrete_sizes, n_continuous)``; ``intercept``
    and ``variance`` have shape ``discrete_sizes``.
    """

    discrete_parents: Tuple[Atom, ...]
    continuous_parents: Tuple[Atom, ...]
    weights: np.ndarray
    intercept: np.ndarray
    variance: np.ndarray

    def __post_init__(self):
        for name in ("weights", "intercept", "variance"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "discrete_parents", tuple(self.discrete_parents))
        object.__setattr__(self, "continuous_parents", tuple(self.continuous_parents))
        dshape = self.intercept.shape
        if (len(dshape) != len(self.discrete_parents) or self.variance.shape != dshape
                or self.weights.shape != dshape + (len(self.continuous_parents),)):
            raise ValueError("inconsistent conditional-Gaussian array shapes")

    @property
    def parents(self):
        return self.discrete_parents + self.continuous_parents

    @property
    def discrete_sizes(self):
        return self.intercept.shape

    def entry(self, config: Tuple[int, ...]):
        """(weights, intercept, variance) for one discrete-parent configuration."""
        return self.weights[config], float(self.intercept[config]), float(self.variance[config])

    def check(self):
        if len(set(self.parents)) != len(self.parents):
            raise ValueError("duplicate parents")
        if (self.variance < 0).any() or not np.isfinite(self.variance).all():
            raise ValueError("negative variance")

    def same_as(self, other) -> bool:
        return (isinstance(other, CondGaussian) and self.parents == other.parents
                and self.discrete_parents == other.discrete_parents
                and all(np.array_equal(getattr(self, f), getattr(other, f))
                        for f in ("weights", "intercept", "variance")))


def dedupe_table(parents, values) -> DiscreteTable:
    """Collapse repeated parents of a table onto its diagonal."""
    parents = tuple(parents)
    unique = tuple(dict.fromkeys(parents))
    if len(unique) == len(parents):
        return DiscreteTable(parents, values)
    letters = {a: chr(ord("a") + i) for i, a in enumerate(unique)}
    child = chr(ord("a") + len(unique))
    spec = "".join(letters[a] for a in parents) + child + "->" + "".join(letters[a] for a in unique) + child
    return DiscreteTable(unique, np.einsum(spec, np.asarray(values, dtype=float)))


def dedupe_gaussian(discrete, continuous, weights, intercept, variance) -> CondGaussian:
    """Merge repeated parents: repeated discrete ones by diagonal, continuous by adding weights."""
    discrete = tuple(discrete)
    weights = np.asarray(weights, dtype=float)
    intercept = np.asarray(intercept, dtype=float)
    variance = np.asarray(variance, dtype=float)
    udisc = tuple(dict.fromkeys(discrete))
    if len(udisc) != len(discrete):
        letters = {a: chr(ord("a") + i) for i, a in enumerate(udisc)}
        src = "".join(letters[a] for a in discrete)
        dst = "".join(letters[a] for a in udisc)
        intercept = np.einsum(f"{src}->{dst}", intercept)
        variance = np.einsum(f"{src}->{dst}", variance)
        weights = np.einsum(f"{src}z->{dst}z", weights)
    ucont = tuple(dict.fromkeys(continuous))
    if len(ucont) != len(continuous):
        merged = np.zeros(intercept.shape + (len(ucont),))
        for k, a in enumerate(continuous):
            merged[..., ucont.index(a)] += weights[..., k]
        weights = merged
    return CondGaussian(udisc, ucont, weights, intercept, variance)


def extend_table(table: DiscreteTable, parents: Tuple[Atom, ...], sizes) -> np.ndarray:
    """View ``table`` over a superset of its parents (constant in the extra ones)."""
    src = {a: i for i, a in enumerate(table.parents)}
    perm = [src[a] for a in parents if a in src] + [len(table.parents)]
    arr = np.transpose(table.values, perm)
    shape = [sizes[i] if a in src else 1 for i, a in enumerate(parents)] + [table.child_size]
    arr = arr.reshape(shape)
    return np.broadcast_to(arr, tuple(sizes) + (table.child_size,))
