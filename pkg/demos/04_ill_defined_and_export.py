"""
When a program has no meaning, and handing networks to other tools
==================================================================

Some programs define no distribution at all: nothing is derivable, an atom
influences itself, or an atom has infinitely many ancestors. ``check`` says
so, and queries end in an error instead of an answer or an endless search.
"""

import tempfile
from pathlib import Path

import blp

for name in ["empty_model", "infinite_influence", "infinite_ancestors"]:
    program = blp.shipped_program(name)
    print(f"{name:20s}", blp.check_well_defined(program))
    try:
        blp.query(program, "r(a)")
    except blp.BlpError as exc:
        print(" " * 20, f"{exc.category}: {exc}")

# %%
# Support networks can be written in the NET format read by Hugin and
# similar tools.
program = blp.shipped_program("height")
n = blp.build_support_network(program, [blp.parse_query("height(fred)").atoms[0]])
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "fred.net"
    blp.write_hugin_net(n, path)
    print(path.read_text())
