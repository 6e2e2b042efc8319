# %% [markdown]
# # A two-parameter family of qutrit channels
#
# Four Kraus operators on C^3, parametrized by |alpha|^2 + |beta|^2 = 1.
# Each member is unital and trace-preserving.  We check which convex sets it
# is extreme in, then look at the special points where extremality fails.

# %%
from ucpt_lab import FamilySpec, build_family, check_ucpt, choi, extremality_verdict, mpq, sqrt_rational
from ucpt_lab.decompositions import check_alpha_one, check_x_decomposition
from ucpt_lab.entanglement import alpha_beta_closed_form, eof_upper_bound

K = build_family(FamilySpec("ucpt_alpha_beta", alpha=mpq(3, 5), beta=mpq(4, 5)))
print("unital, trace-preserving:", check_ucpt(K))
print("Choi rank:", choi(K)[1])

# %% [markdown]
# Extremality in the unital CP maps needs {A_j^* A_k} independent; in the
# trace-preserving maps, {A_j A_k^*}.  Both fail with four generators in M_3
# (16 products in a 9-dimensional space), yet the direct sums
# A_j^* A_k + A_k A_j^* can still be independent.

# %%
ev = extremality_verdict(K)
for key in ("ucp_extreme", "cpt_extreme", "ucpt_extreme_LS"):
    print(f"{key:16s} {ev[key]}")

# %% [markdown]
# At alpha = 1 the channel is an average of four unitary conjugations, and
# at alpha = beta = 1/sqrt2 it splits off a unitary piece with weight 1/4.

# %%
print("alpha = 1 as unitary mixture:", check_alpha_one())
print("alpha = beta = 1/sqrt2 split:", check_x_decomposition())

# %% [markdown]
# Entanglement of the Choi state, bounded above by the Kraus-vector ensemble.

# %%
for a2 in (0, mpq(1, 4), mpq(1, 2), mpq(3, 4), 1):
    a, b = sqrt_rational(mpq(a2)), sqrt_rational(1 - mpq(a2))
    bound, _, orth = eof_upper_bound(build_family(FamilySpec("ucpt_alpha_beta", alpha=a, beta=b)))
    print(f"|alpha|^2 = {str(a2):4s} bound = {bound:.6f}  closed form = {alpha_beta_closed_form(float(a2)):.6f}")
