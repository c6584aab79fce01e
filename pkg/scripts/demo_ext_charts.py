"""
Ext charts from the cobar complex
=================================

Ext over the exterior quotient is polynomial on v0, v1, v2, ... along the
rho line and vanishes one degree below it.
"""

from c2steenrod import cobar as K
from c2steenrod.cli import execute

# %%
# The chart along the rho line, as the CLI draws it
_report, _code, text = execute(["--format", "ascii", "ext", "--smax", "5", "--nmax", "5"])
print(text)

# %%
# Named generators in a few spots
for s, V in [(1, (1, 0)), (1, (2, 1)), (2, (4, 2)), (3, (5, 2))]:
    e = K.ext_at("lambda", "hf", s, V)
    print(s, V, e.dim, e.gens)

# %%
# Cotor over E(tau0) against the closed form: the only disagreements are
# the classes th/u^(2m) and their v0-multiples
chart = K.cotor_e_tau0(3, 6)
for bad in K.compare_cotor(chart)[:6]:
    print(bad)
print("with th/u^(2m) added:", K.compare_cotor(chart, corrected=True) == [])

# %%
# Change of rings: the big complex over A with the polynomial comodule agrees
report = K.change_of_rings_check(1, 4)
print("change of rings, s <= 1:", report.passed, report.checked, "bidegrees")
