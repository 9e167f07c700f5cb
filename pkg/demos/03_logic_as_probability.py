"""
Plain logic programs as a special case
======================================

With deterministic tables (true exactly when the whole body is true) and the
max rule, a probabilistic query returns probability one for every provable
ground atom and reports unprovable atoms as undefined.
"""

import blp
from blp.inference import query_network

program = blp.shipped_program("parents")
print(blp.format_program(program))

# %%
for text in ["parent(jef,paul)", "parent(an,paul)", "father(jef,paul)"]:
    print(blp.query(program, text).format())

# %%
# Nothing proves parent(paul,jef); closing the world for parent/2 turns the
# undefined answer into a certain false.
try:
    blp.query(program, "parent(paul,jef)")
except blp.UndefinedVariableError as exc:
    print("undefined:", exc)
print(blp.query(program, "parent(paul,jef)", closed_world=[("parent", 2)]).format())

# %%
# Function symbols are fine as long as each query has finitely many proofs.
# The least model of this program is infinite, yet the query grounds only a
# three node chain.
evenodd = blp.shipped_program("evenodd")
q = blp.parse_query("odd(s(0)) | even(s(s(0)))=true", evenodd)
print([str(a) for a in query_network(evenodd, q).nodes])
print(blp.answer_query(evenodd, q).format())
