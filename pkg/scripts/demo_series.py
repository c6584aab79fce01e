"""
Generating series and their conjugates
======================================

The generators of the dual Steenrod algebra are packaged into two series,
xi(t) and tau(t).  Conjugation is compositional inversion.
"""

from c2steenrod import series as S

# %%
# The series themselves, with an explicit truncation
print(S.render_series(S.xi_series(9)))
print(S.render_series(S.tau_series(9)))

# %%
# Conjugates come from the recursion; the first few
for i in range(4):
    print(f"xibar{i} =", S.render_poly(S.conjugate_xi(i)))
for i in range(3):
    print(f"taubar{i} =", S.render_poly(S.conjugate_tau(i)))

# %%
# xi(xibar(t)) = t, checked far past the first few terms
ceiling = 64
t = S.LaurentSeries.t()
composite = S.compose(S.xi_series(ceiling), S.xibar_series(ceiling))
print("xi(xibar(t)) = t mod t^64:", composite.agrees_with(t, ceiling))

# %%
# Negative powers are Laurent series; the residue is the t^-1 coefficient
inv = S.power(S.xi_series(12), -1)
print(S.render_series(inv.truncate(4)))
print("res xibar(t)^-1 =", S.render_poly(S.residue(S.power(S.xibar_series(8), -1))))
