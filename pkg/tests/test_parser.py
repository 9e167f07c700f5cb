import pytest
from hypothesis import given, settings, strategies as st

from blp import shipped_program, shipped_program_path
from blp.errors import (
    BlpSyntaxError, EvidenceTypeError, NonGroundQueryError, ValidationError,
)
from blp.parser import format_program, parse_program, parse_query, tokenize
from blp.program import CONTINUOUS, DISCRETE

from helpers import atom

SHIPPED = ["height", "parents", "evenodd", "burglary", "sneezing", "empty_model",
           "infinite_influence", "infinite_ancestors"]

TINY = """
domain(a/0, discrete, [true, false]).
a.
cpd(a, [0.25, 0.75]).
"""


def test_domain_statement():
    p = parse_program("domain(height/1,continuous,real).\nheight(ann).\n"
                      "cpd(height(ann),[normal(175,60)]).")
    d = p.domains[("height", 1)]
    assert d.kind == CONTINUOUS and d.predicate == ("height", 1)


def test_empty_source_is_invalid():
    with pytest.raises(ValidationError):
        parse_program("")


def test_missing_domain_is_named():
    with pytest.raises(ValidationError, match="missing domain for height/1"):
        parse_program("height(ann).\ncpd(height(ann),[normal(175,60)]).")


def test_duplicate_domain_rejected():
    with pytest.raises(ValidationError):
        parse_program("domain(a/0,discrete,[t,f]).\ndomain(a/0,discrete,[t,f]).\na.\ncpd(a,[1,0]).")


def test_missing_and_extra_cpd():
    with pytest.raises(ValidationError, match="missing cpd"):
        parse_program("domain(a/0,discrete,[t,f]).\na.")
    with pytest.raises(ValidationError):
        parse_program(TINY + "cpd(a, [0.5, 0.5]).")


def test_row_sums_and_lengths_are_checked():
    with pytest.raises(ValidationError, match="sums to"):
        parse_program("domain(a/0,discrete,[t,f]).\na.\ncpd(a,[0.5,0.6]).")
    with pytest.raises(ValidationError, match="expected 2"):
        parse_program("domain(a/0,discrete,[t,f]).\na.\ncpd(a,[1.0]).")


def test_non_range_restricted_clause_rejected():
    src = ("domain(h/1,continuous,real).\nh(a).\nh(X) | h(Y).\n"
           "cpd(h(a),[normal(1,1)]).\ncpd((h(X)|h(Y)),[normal(1*h(Y),1)]).")
    with pytest.raises(ValidationError, match="range-restricted"):
        parse_program(src)


def test_discrete_head_with_continuous_body_rejected():
    src = ("domain(h/1,continuous,real).\ndomain(b/1,discrete,[t,f]).\nh(a).\nb(X) | h(X).\n"
           "cpd(h(a),[normal(1,1)]).\ncpd((b(X)|h(X)),[0.5,0.5]).")
    with pytest.raises(ValidationError, match="continuous body"):
        parse_program(src)


def test_mean_may_only_mention_continuous_body_atoms():
    src = ("domain(h/1,continuous,real).\ndomain(b/1,discrete,[t,f]).\nh(a). b(a).\nh(X) | b(X).\n"
           "cpd(h(a),[normal(1,1)]).\ncpd(b(a),[0.5,0.5]).\n"
           "cpd((h(X)|b(X)),[normal(1*b(X),1), normal(0,1)]).")
    with pytest.raises(ValidationError):
        parse_program(src)


def test_discrete_ordering_child_fastest():
    p = shipped_program("burglary")
    alarm = next(c for c in p.clauses if c.head.predicate == "alarm")
    values = p.cpds[alarm.id].values
    # (burglary=true, earthquake=false) is the second parent row
    assert values[2:4] == (0.94, 0.06)


def test_gaussian_cpd_of_pedigree_clause():
    p = shipped_program("height")
    rule = next(c for c in p.clauses if c.body)
    entries = p.cpds[rule.id].entries
    assert len(entries) == 4
    assert entries[0].terms == ((2, 0.5), (3, 0.5)) and entries[0].variance == 60
    assert entries[3].intercept == 175 and entries[3].terms == ()


def test_mean_expression_forms():
    base = ("domain(h/1,continuous,real).\nh(a).\nh(b) | h(a).\ncpd(h(a),[normal(0,1)]).\n")
    for text, terms, b0 in [("2*h(a)+3", ((0, 2.0),), 3.0), ("3 + 2*h(a)", ((0, 2.0),), 3.0),
                            ("h(a) - 1", ((0, 1.0),), -1.0), ("-0.5*h(a)", ((0, -0.5),), 0.0)]:
        p = parse_program(base + f"cpd((h(b)|h(a)),[normal({text}, 1)]).")
        e = p.cpds[1].entries[0]
        assert (e.terms, e.intercept) == (terms, b0), text


def test_twin_clauses_get_their_own_cpds():
    src = """
    domain(a/0, discrete, [true, false]).
    domain(b/0, discrete, [true, false]).
    combining_rule(b/0, max).
    a.
    b | a.
    b | a.
    cpd(a, [1.0, 0.0]).
    cpd((b | a), [0.3, 0.7, 0.0, 1.0]).
    cpd((b | a), [0.6, 0.4, 0.0, 1.0]).
    """
    p = parse_program(src)
    assert p.cpds[1].values[0] == 0.3 and p.cpds[2].values[0] == 0.6


def test_comments_and_quoted_names():
    p = parse_program("% leading comment\n" + TINY.replace("a.", "a. % trailing"))
    assert len(p.clauses) == 1
    q = parse_query("mother('ann', fred)")
    assert str(q.atoms[0]) == "mother(ann,fred)"


def test_syntax_errors_carry_location():
    with pytest.raises(BlpSyntaxError) as exc:
        parse_program("domain(a/0, discrete, [true, false]).\na | .\n")
    assert exc.value.line == 2 and exc.value.column >= 1
    with pytest.raises(BlpSyntaxError):
        tokenize("a. # b.")


def test_parse_query_examples():
    p = shipped_program("height")
    q = parse_query("height(fred) | height(ann)=155", p)
    assert q.atoms == (atom("height(fred)"),)
    assert q.evidence == ((atom("height(ann)"), 155.0),)
    assert isinstance(q.evidence[0][1], float)
    assert parse_query("height(fred)", p).evidence == ()
    assert parse_query("?- height(fred), height(eric).", p).atoms == (
        atom("height(fred)"), atom("height(eric)"))


def test_parse_query_errors():
    p = shipped_program("height")
    with pytest.raises(NonGroundQueryError):
        parse_query("height(X)", p)
    with pytest.raises(EvidenceTypeError):
        parse_query("height(fred) | height(ann)=tall", p)
    with pytest.raises(EvidenceTypeError):
        parse_query("height(fred) | mother(ann,fred)=maybe", p)
    with pytest.raises(TypeError):
        parse_query("height(fred) | mother(ann,fred)=1.5", p)
    with pytest.raises(ValidationError):
        parse_query("height(fred) | height(ann)=1, height(ann)=2", p)
    with pytest.raises(ValidationError):
        parse_query("height(fred) | height(fred)=1", p)
    with pytest.raises(BlpSyntaxError):
        parse_query("height(fred) |", p)


def test_discrete_evidence_is_typed():
    p = shipped_program("burglary")
    q = parse_query("johncalls | alarm=true", p)
    assert q.evidence == ((atom("alarm"), "true"),)


@pytest.mark.parametrize("name", SHIPPED)
def test_round_trip(name):
    p = shipped_program(name)
    again = parse_program(format_program(p))
    assert again.clauses == p.clauses
    assert again.domains == p.domains
    assert again.rules == p.rules
    assert again.cpds == p.cpds
    assert format_program(again) == format_program(p)


def test_shipped_domains_are_declared():
    for name in SHIPPED:
        p = shipped_program(name)
        for d in p.domains.values():
            assert d.kind in (DISCRETE, CONTINUOUS)
            if d.kind == DISCRETE:
                assert d.states and len(set(d.states)) == len(d.states)


HEIGHT_TEXT = shipped_program_path("height").read_text()


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=len(HEIGHT_TEXT)))
def test_truncated_programs_fail_cleanly(cut):
    try:
        parse_program(HEIGHT_TEXT[:cut])
    except (BlpSyntaxError, ValidationError):
        pass


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=len(HEIGHT_TEXT) - 1),
       st.sampled_from(list("()|,.=[]%*+-'") + ["X", "9", " "]))
def test_corrupted_programs_fail_cleanly(pos, ch):
    try:
        parse_program(HEIGHT_TEXT[:pos] + ch + HEIGHT_TEXT[pos + 1:])
    except (BlpSyntaxError, ValidationError):
        pass
