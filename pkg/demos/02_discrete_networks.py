"""
Alarms and sneezes
==================

Discrete programs compile to ordinary Bayesian networks and are answered by
variable elimination. When one atom has several proofs, a combining rule
merges the per-clause tables.
"""

import blp

# %%
# Pearl's burglary network written as clauses. Both neighbours calling makes
# a burglary far more likely than its prior of one in a thousand.
alarm = blp.shipped_program("burglary")
print(blp.query(alarm, "burglary").format())
print(blp.query(alarm, "burglary | johncalls=true, marycalls=true").format())

# %%
# ann sneezes from a cold or from hay fever. The two causes act
# independently, which is what noisy_or encodes.
sneezing = blp.shipped_program("sneezing")
print(blp.query(sneezing, "sneezes(ann)").format())

# %%
# Answers can also be exported as JSON for other tools.
print(blp.query(alarm, "alarm | earthquake=true").to_json())
