"""Bayesian logic programs: definite clauses whose ground atoms are random variables.

A query is answered by proving its atoms, collecting every ground clause
instance the proofs use into a support network, and running exact inference
on that network.
"""

from importlib import resources

from .combining import DEFAULT_RULES, combine, make_registry
from .cpd import CondGaussian, DiscreteTable
from .errors import (
    BlpError, BlpSyntaxError, CycleError, DomainError, EvidenceTypeError,
    InconsistentEvidenceError, NameCollisionError, NonGroundQueryError, ResourceExceeded,
    RuleArityError, SingularEvidenceError, UndefinedVariableError, UnknownRuleError,
    UnsupportedModelError, ValidationError,
)
from .hugin import export_hugin_net, write_hugin_net
from .inference import (
    DiscreteAnswer, Factor, GaussianAnswer, GaussianBelief, MixtureAnswer, QueryOptions,
    answer_query, enumerate_joint, gaussian_query, variable_elimination,
)
from .network import SupportNetwork, build_support_network, prune
from .parser import format_program, parse_program, parse_query
from .program import DomainDecl, Program, Query
from .proofs import Limits, build_sld_tree, solution_graph
from .semantics import (
    Bounds, check_well_defined, dependency_graph, immediate_consequence, least_herbrand_model,
)
from .terms import Atom, Clause, Struct, Var, apply, compose, unify

__version__ = "0.1.0"


def load_program(path) -> Program:
    """Parse the ``.blp`` file at ``path``."""
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


def shipped_program(name: str) -> Program:
    """One of the programs bundled with the package, e.g. ``"height"``."""
    return parse_program(shipped_program_path(name).read_text(encoding="utf-8"))


def shipped_program_path(name: str):
    return resources.files(__package__).joinpath("programs", f"{name}.blp")


def query(p: Program, text: str, **options):
    """Parse ``text`` against ``p`` and answer it."""
    return answer_query(p, parse_query(text, p), **options)
