"""
Power operations on the dual Steenrod algebra
=============================================

Operations on tau_k are read off the co-Nishida relation for the class c
of Bmu2, using only the general laws for everything else.
"""

from c2steenrod import dual as D
from c2steenrod.ops import (
    C, QSymbol, co_nishida_check, derive_action_on_tau, q_on_bmu, q_on_dual_steenrod,
)
from c2steenrod.parse import parse_expression

# %%
# Solving the relation, one k at a time
for k in range(4):
    print(f"Q^({1 << k}rho) tau{k} =", derive_action_on_tau(k))

# %%
# The Bockstein of the answer is the next xi
for k in range(3):
    x = q_on_dual_steenrod(QSymbol(1 << k), D.TAU(k))
    print(f"beta Q tau{k} =", D.bockstein(x))

# %%
# On Bmu2 the operations on powers of b are a one-line generating function
b4 = parse_expression("b^4")
for s in (-4, -2, 0):
    print(f"Q^({s}rho) b^4 =", q_on_bmu(QSymbol(s), b4))

# %%
# Both sides of the relation agree coefficient by coefficient
for text in ("1", "b", "b^2", "c", "c*b"):
    report = co_nishida_check(parse_expression(text, "bmu"), 3, 12)
    print(f"{text:>4}: {report.passed} ({report.checked} coefficients)")

# %%
# Conjugates transform just as cleanly, with no correction term
print(q_on_dual_steenrod(QSymbol(2), D.conjugate(D.TAU(1)), "derived") == D.conjugate(D.TAU(2)))
print(C, "->", q_on_bmu(QSymbol(-1, True), C))
