"""
Heights in a family tree
========================

Every person's height is a continuous random variable. A child's height is
Gaussian around the average of the parents' heights, and the founders of the
tree share one prior. Observing one relative shifts everyone else.
"""

import numpy as np

import blp

# %%
# The program ships with the package. ``check`` tells us every atom has
# finitely many ancestors, so queries are well posed.
program = blp.shipped_program("height")
print(blp.check_well_defined(program))

# %%
# Before looking at anyone, john is centered on the founders' mean.
prior = blp.query(program, "height(john)")
print(prior.format())

# %%
# Seeing that ann is short pulls the estimate for john down and narrows it.
posterior = blp.query(program, "height(john) | height(ann)=165")
print(posterior.format())

# %%
# A joint query returns the full covariance of the three grandchildren.
joint = blp.query(program, "height(henry), height(irene), height(john)")
np.set_printoptions(precision=3, suppress=True)
print(joint.mean)
print(joint.covariance)

# %%
# Only proofs of the query atoms are grounded. The network for fred has
# five nodes: fred, the two parents and the two parenthood facts.
n = blp.build_support_network(program, [blp.parse_query("height(fred)").atoms[0]])
for a in n.nodes:
    print(a, "<-", ", ".join(map(str, n.parents(a))) or "(root)")
