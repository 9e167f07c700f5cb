import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blp import shipped_program
from blp.errors import ResourceExceeded
from blp.parser import parse_program
from blp.semantics import (
    Bounds, check_well_defined, dependency_graph, immediate_consequence, least_herbrand_model,
)

from helpers import atom, atoms, herbrand_base, naive_ground_instances, naive_least_model, random_logic_program

DERIVED_HEIGHTS = atoms("height(fred)", "height(dorothy)", "height(eric)", "height(gwenn)",
                        "height(henry)", "height(irene)", "height(john)")


@pytest.fixture(scope="module")
def height():
    return shipped_program("height")


def test_tp_of_empty_set_is_the_facts(height):
    i1 = immediate_consequence(height, frozenset())
    assert len(i1) == 19
    assert i1 == {c.head for c in height.clauses if c.is_fact}


def test_tp_second_step(height):
    i1 = immediate_consequence(height, frozenset())
    i2 = immediate_consequence(height, i1)
    # one step derives the children of founders; the fixpoint adds the rest
    assert i2 == i1 | set(atoms("height(fred)", "height(dorothy)", "height(eric)", "height(gwenn)"))
    model = least_herbrand_model(height)
    assert model == i1 | set(DERIVED_HEIGHTS)


def test_tp_of_empty_program_like_input():
    p = parse_program("domain(r/1,discrete,[t,f]).\ndomain(s/1,discrete,[t,f]).\n"
                      "r(X) | s(X).\ncpd((r(X)|s(X)),[1,0,0,1]).")
    assert immediate_consequence(p, frozenset(atoms("r(a)"))) == frozenset()
    assert least_herbrand_model(p) == frozenset()


def test_height_model_size(height):
    model = least_herbrand_model(height)
    assert len(model) == 26
    assert sum(a.predicate in ("mother", "father") for a in model) == 14


def test_infinite_model_hits_bound():
    with pytest.raises(ResourceExceeded) as exc:
        least_herbrand_model(shipped_program("evenodd"), max_atoms=100)
    assert exc.value.partial and len(exc.value.partial) <= 101


def test_iteration_bound_reports_partial_model():
    with pytest.raises(ResourceExceeded) as exc:
        least_herbrand_model(shipped_program("evenodd"), max_iterations=5)
    assert atom("even(0)") in exc.value.partial and exc.value.iterations == 5


def test_tp_atom_bound(height):
    with pytest.raises(ResourceExceeded):
        immediate_consequence(height, frozenset(), max_atoms=3)


def test_dependency_graph_edges(height):
    g = dependency_graph(height, least_herbrand_model(height))
    assert (atom("height(ann)"), atom("height(fred)")) in g.edges
    assert g.parents(atom("height(fred)")) == set(atoms(
        "height(ann)", "height(unknown1)", "mother(ann,fred)", "father(unknown1,fred)"))
    assert g.find_cycle() is None


def test_facts_only_graph_has_no_edges():
    p = parse_program("domain(a/1,discrete,[t,f]).\na(x).\na(y).\ncpd(a(x),[1,0]).\ncpd(a(y),[1,0]).")
    g = dependency_graph(p, least_herbrand_model(p))
    assert len(g.nodes) == 2 and not g.edges


def test_self_loop_in_second_ill_defined_program():
    p = shipped_program("infinite_influence")
    with pytest.raises(ResourceExceeded) as exc:
        least_herbrand_model(p, max_atoms=50)
    g = dependency_graph(p, exc.value.partial)
    assert (atom("r(a)"), atom("r(a)")) in g.edges


def test_well_definedness_reports():
    assert check_well_defined(shipped_program("height")).ok
    assert str(check_well_defined(shipped_program("empty_model"))) == "IllDefined(EmptyModel)"
    r2 = check_well_defined(shipped_program("infinite_influence"))
    assert r2.status == "IllDefined" and r2.reason == "CycleFound"
    assert r2.witness[0] == r2.witness[-1]
    r3 = check_well_defined(shipped_program("infinite_ancestors"), Bounds(max_atoms=500))
    assert r3.status in ("Undetermined", "IllDefined")
    if r3.status == "IllDefined":
        assert r3.reason == "InfiniteInfluenceSuspected"


def test_cycle_witness_is_reproducible():
    p = parse_program("""
        domain(a/1, discrete, [t, f]).
        a(x).
        a(y) | a(x).
        a(x) | a(y).
        combining_rule(a/1, max).
        cpd(a(x), [1, 0]).
        cpd((a(y) | a(x)), [1, 0, 0, 1]).
        cpd((a(x) | a(y)), [1, 0, 0, 1]).
    """)
    report = check_well_defined(p)
    assert report.reason == "CycleFound"
    g = dependency_graph(p, least_herbrand_model(p))
    for u, v in zip(report.witness, report.witness[1:]):
        assert (u, v) in g.edges


def test_infinite_influence_suspected_with_small_ancestor_bound():
    p = shipped_program("infinite_ancestors")
    r = check_well_defined(p, Bounds(max_iterations=60, ancestor_bound=20, max_term_depth=1000))
    assert r.status == "IllDefined" and r.reason == "InfiniteInfluenceSuspected"
    assert "more than 20 ancestors" in str(r)


def test_undetermined_when_bounds_hit_without_verdict():
    r = check_well_defined(shipped_program("evenodd"), Bounds(max_atoms=40))
    assert r.status == "Undetermined"


# --- properties on random function-free programs -----------------------------

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_least_model_matches_naive_oracle_and_is_fixpoint(seed):
    src, arity, consts = random_logic_program(np.random.default_rng(seed))
    p = parse_program(src)
    model = least_herbrand_model(p)
    assert model == naive_least_model(p, consts)
    assert immediate_consequence(p, model) == model


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_tp_is_monotone(seed, data):
    src, arity, consts = random_logic_program(np.random.default_rng(seed))
    p = parse_program(src)
    base = sorted(herbrand_base(arity, consts), key=str)
    j = set(data.draw(st.lists(st.sampled_from(base), max_size=12))) if base else set()
    i = {a for a in j if data.draw(st.booleans())}
    assert immediate_consequence(p, i) <= immediate_consequence(p, j)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_dependency_edges_match_exhaustive_grounding(seed):
    src, arity, consts = random_logic_program(np.random.default_rng(seed))
    p = parse_program(src)
    model = least_herbrand_model(p)
    expected = set()
    for _, g in naive_ground_instances(p, consts):
        if g.head in model and all(b in model for b in g.body):
            expected |= {(b, g.head) for b in g.body}
    assert dependency_graph(p, model).edges == expected
