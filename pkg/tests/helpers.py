"""Independent oracles and random generators shared by the tests.

Nothing here calls the engine's inference or grounding code; the oracles
are written from the definitions so they can check that code.
"""

import itertools
import math

import numpy as np

from blp import parse_query
from blp.cpd import CondGaussian, DiscreteTable
from blp.network import SupportNetwork
from blp.program import CONTINUOUS, DISCRETE, DomainDecl
from blp.terms import Atom, Struct

BOOL = ("true", "false")


def atom(text):
    """Parse one ground atom."""
    return parse_query(text).atoms[0]


def atoms(*texts):
    return [atom(t) for t in texts]


# --- pedigree covariance oracle --------------------------------------------

PEDIGREE = {  # child: (mother, father)
    "fred": ("ann", "unknown1"),
    "dorothy": ("ann", "brian"),
    "eric": ("cecily", "brian"),
    "gwenn": ("ann", "unknown2"),
    "henry": ("dorothy", "fred"),
    "irene": ("gwenn", "eric"),
    "john": ("irene", "henry"),
}
FOUNDERS = ("ann", "brian", "cecily", "unknown1", "unknown2")


def pedigree_moments(prior_mean=175.0, var=60.0):
    """Joint moments of all heights from the structural form x = Bx + c + e.

    Solves (I - B) mu = c and Sigma = (I - B)^-1 D (I - B)^-T directly, with
    no recursion over a topological order.
    """
    names = list(FOUNDERS) + list(PEDIGREE)
    k = {n: i for i, n in enumerate(names)}
    B = np.zeros((len(names), len(names)))
    c = np.zeros(len(names))
    for n in FOUNDERS:
        c[k[n]] = prior_mean
    for child, (m, f) in PEDIGREE.items():
        B[k[child], k[m]] = 0.5
        B[k[child], k[f]] = 0.5
    A = np.linalg.inv(np.eye(len(names)) - B)
    mu = A @ c
    sigma = A @ (var * np.eye(len(names))) @ A.T
    return names, mu, sigma


def gaussian_condition(names, mu, sigma, observed):
    """Textbook conditioning via an explicit inverse (small, well-conditioned cases)."""
    e = [names.index(n) for n in observed]
    r = [i for i in range(len(names)) if i not in e]
    x = np.array(list(observed.values()), dtype=float)
    see = sigma[np.ix_(e, e)]
    sre = sigma[np.ix_(r, e)]
    gain = sre @ np.linalg.inv(see)
    mean = mu[r] + gain @ (x - mu[e])
    cov = sigma[np.ix_(r, r)] - gain @ sre.T
    return [names[i] for i in r], mean, cov


# --- random networks --------------------------------------------------------

def _node(i):
    return Atom(f"x{i:02d}")


def random_dag_parents(rng, n, max_parents=3):
    parents = []
    for i in range(n):
        k = int(rng.integers(0, min(i, max_parents) + 1))
        parents.append(tuple(sorted(rng.choice(i, size=k, replace=False).tolist())) if k else ())
    return parents


def random_discrete_network(rng, n, max_parents=3, cards=None):
    """A random DAG of discrete nodes with strictly positive random tables."""
    cards = cards or [2] * n
    parents = random_dag_parents(rng, n, max_parents)
    nodes = [_node(i) for i in range(n)]
    domains, cpds = {}, {}
    for i, a in enumerate(nodes):
        states = tuple(f"s{j}" for j in range(cards[i]))
        domains[a] = DomainDecl((a.predicate, 0), DISCRETE, states)
        shape = tuple(cards[j] for j in parents[i]) + (cards[i],)
        table = rng.dirichlet(np.ones(cards[i]), size=shape[:-1] or None)
        cpds[a] = DiscreteTable(tuple(nodes[j] for j in parents[i]), np.reshape(table, shape))
    return SupportNetwork(tuple(nodes), domains, cpds), parents


def random_linear_gaussian(rng, n, max_parents=3):
    parents = random_dag_parents(rng, n, max_parents)
    nodes = [_node(i) for i in range(n)]
    domains, cpds = {}, {}
    for i, a in enumerate(nodes):
        domains[a] = DomainDecl((a.predicate, 0), CONTINUOUS)
        w = rng.normal(0.0, 1.0, size=len(parents[i]))
        cpds[a] = CondGaussian((), tuple(nodes[j] for j in parents[i]), w,
                               rng.normal(0.0, 5.0), rng.uniform(0.5, 3.0))
    return SupportNetwork(tuple(nodes), domains, cpds), parents


def brute_force_joint(n):
    """Joint over ``n.nodes`` as a dict from state tuples to probabilities."""
    nodes = list(n.nodes)
    out = {}
    for config in itertools.product(*(range(n.domains[a].size) for a in nodes)):
        val = dict(zip(nodes, config))
        p = 1.0
        for a in nodes:
            cpd = n.cpds[a]
            p *= float(cpd.values[tuple(val[q] for q in cpd.parents) + (val[a],)])
        out[config] = p
    return out


def brute_force_conditional(n, query, evidence):
    """p(query | evidence) from :func:`brute_force_joint`, as an array."""
    nodes = list(n.nodes)
    joint = brute_force_joint(n)
    shape = [n.domains[a].size for a in query]
    out = np.zeros(shape)
    for config, p in joint.items():
        val = dict(zip(nodes, config))
        if all(val[a] == s for a, s in evidence.items()):
            out[tuple(val[a] for a in query)] += p
    return out / out.sum()


def ancestral_sample(n, rng, size):
    """Forward samples of an all-continuous linear-Gaussian network."""
    cols = {}
    for a in n.nodes:
        cpd = n.cpds[a]
        mean = np.full(size, float(cpd.intercept))
        for w, p in zip(cpd.weights, cpd.continuous_parents):
            mean = mean + w * cols[p]
        cols[a] = mean + rng.normal(0.0, math.sqrt(float(cpd.variance)), size=size)
    return cols


# --- combining rule oracles ------------------------------------------------

def noisy_or_direct(p_true_given_true, assignment):
    """P(child=false | parents) by the product of inhibitions of the true parents."""
    p = 1.0
    for pk, ak in zip(p_true_given_true, assignment):
        if ak:
            p *= 1.0 - pk
    return p


# --- random function-free logic programs ----------------------------------

def random_logic_program(rng, n_preds=6, n_consts=5):
    """Layered, function-free, range-restricted program with deterministic conjunction cpds and max.

    Returns (source text, predicate arities, constants).
    """
    n_preds = int(rng.integers(2, n_preds + 1))
    n_consts = int(rng.integers(1, n_consts + 1))
    consts = [f"c{i}" for i in range(n_consts)]
    arity = {f"p{i}": int(rng.integers(0, 3)) for i in range(n_preds)}
    preds = list(arity)
    lines = []
    for p in preds:
        lines.append(f"domain({p}/{arity[p]}, discrete, [true, false]).")
        lines.append(f"combining_rule({p}/{arity[p]}, max).")
    clauses = []
    # facts on the lower half of the layers
    for p in preds[: max(1, n_preds // 2)]:
        for _ in range(int(rng.integers(1, 4))):
            args = [consts[int(rng.integers(n_consts))] for _ in range(arity[p])]
            clauses.append((_atom_text(p, args), []))
    for i, p in enumerate(preds[1:], start=1):
        for _ in range(int(rng.integers(0, 3))):
            body = []
            pool = []
            for _ in range(int(rng.integers(1, 3))):
                q = preds[int(rng.integers(i))]
                args = []
                for _ in range(arity[q]):
                    if rng.random() < 0.25:
                        args.append(consts[int(rng.integers(n_consts))])
                    else:
                        v = "XYZ"[int(rng.integers(3))]
                        args.append(v)
                        pool.append(v)
                body.append(_atom_text(q, args))
            head_args = []
            for _ in range(arity[p]):
                if pool and rng.random() < 0.8:
                    head_args.append(pool[int(rng.integers(len(pool)))])
                else:
                    head_args.append(consts[int(rng.integers(n_consts))])
            clauses.append((_atom_text(p, head_args), body))
    for head, body in clauses:
        lines.append(f"{head} | {', '.join(body)}." if body else f"{head}.")
    for head, body in clauses:
        n = len(body)
        values = [1.0, 0.0] + [0.0, 1.0] * (2 ** n - 1)
        ref = f"({head} | {', '.join(body)})" if body else head
        lines.append(f"cpd({ref}, [{', '.join(map(str, values))}]).")
    return "\n".join(lines) + "\n", arity, consts


def _atom_text(p, args):
    return f"{p}({','.join(args)})" if args else p


def herbrand_base(arity, consts):
    for p, k in arity.items():
        for args in itertools.product(consts, repeat=k):
            yield Atom(p, tuple(Struct(c) for c in args))


def naive_ground_instances(program, consts):
    """Every ground instance of every clause over ``consts`` (function-free only)."""
    from blp.terms import apply, variables
    for c in program.clauses:
        vs = variables(c)
        for combo in itertools.product(consts, repeat=len(vs)):
            s = {v: Struct(k) for v, k in zip(vs, combo)}
            yield c, apply(s, c)


def naive_least_model(program, consts):
    """Least model by repeated passes over all ground instances."""
    ground = [g for _, g in naive_ground_instances(program, consts)]
    model = set()
    while True:
        new = {g.head for g in ground if all(b in model for b in g.body)} | model
        if new == model:
            return frozenset(model)
        model = new


# --- acceptance bookkeeping --------------------------------------------------

ACCEPTANCE = {}  # criterion number -> (passed, title, detail)
