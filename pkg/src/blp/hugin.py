"""Writer for support networks in a small subset of the Hugin NET language.

Node identifiers are the atoms' text with ``(`` and ``)`` deleted and ``,``
turned into ``_``, so ``mother(ann,fred)`` becomes ``motherann_fred``.
Continuous potentials carry one ``normal(mean, variance)`` entry per
configuration of the discrete parents, with the mean written symbolically
over the continuous parents. Not every Hugin version reads that form.
"""

from __future__ import annotations

import itertools
from typing import Dict

from .cpd import CondGaussian
from .errors import NameCollisionError
from .network import SupportNetwork
from .program import GaussianEntry, format_number
from .parser import mean_expression_text
from .terms import Atom

HEADER = "net\n{\n  node_size = (100 40);\n}\n"


def mangle(atom: Atom) -> str:
    return str(atom).replace("(", "").replace(")", "").replace(",", "_")


def node_names(n: SupportNetwork) -> Dict[Atom, str]:
    names: Dict[Atom, str] = {}
    seen: Dict[str, Atom] = {}
    for a in n.nodes:
        name = mangle(a)
        if name in seen:
            raise NameCollisionError(f"{seen[name]} and {a} both export as {name}")
        seen[name] = a
        names[a] = name
    return names


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _gaussian_entries(cpd: CondGaussian, names):
    cont = [names[a] for a in cpd.continuous_parents]
    out = []
    for config in itertools.product(*map(range, cpd.discrete_sizes)):
        w, b, var = cpd.entry(config)
        terms = tuple((k, float(x)) for k, x in enumerate(w) if x != 0.0)
        text = mean_expression_text(GaussianEntry(b, terms, var), cont)
        out.append(f"normal({text}, {format_number(var)})")
    return out


def export_hugin_net(n: SupportNetwork) -> str:
    """NET text for ``n``: header, node blocks, then potential blocks."""
    names = node_names(n)
    parts = [HEADER]
    for a in n.nodes:
        d = n.domains[a]
        if d.is_discrete:
            states = " ".join(_quote(s) for s in d.states)
            parts.append(f"\ndiscrete node {names[a]}\n{{\n  states = ({states});\n"
                         f"  label = {_quote(str(a))};\n}}\n")
        else:
            parts.append(f"\ncontinuous node {names[a]}\n{{\n  label = {_quote(str(a))};\n}}\n")
    for a in n.nodes:
        cpd = n.cpds[a]
        cond = " ".join(names[p] for p in cpd.parents)
        head = f"{names[a]} | {cond}" if cond else names[a]
        if isinstance(cpd, CondGaussian):
            data = " ".join(_gaussian_entries(cpd, names))
        else:
            data = " ".join(format_number(x) for x in cpd.values.reshape(-1))
        parts.append(f"\npotential ({head})\n{{\n  data = ({data});\n}}\n")
    return "".join(parts)


def write_hugin_net(n: SupportNetwork, path) -> None:
    text = export_hugin_net(n)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
