# %% [markdown]
# # Exact factorizations through matrix algebras
#
# A unital trace-preserving map is factorizable if
# Phi(rho) = (I (x) tau) U^* (rho (x) I) U for a unitary U.  We build several
# such unitaries exactly and verify them on every matrix unit.

# %%
from ucpt_lab import FamilySpec, build_family, mpq
from ucpt_lab.factorization import (arveson_ohno_premises, build_named_unitary, composed_channel,
                                    d3_dual_unitary, d3_pair, d4_condition_check, mub_default,
                                    verify_exact_factorization)

K = build_family(FamilySpec("ucpt_alpha_beta", alpha=mpq(3, 5), beta=mpq(4, 5)))
w = verify_exact_factorization(build_named_unitary("ucpt_2x2", K), K, 2)
print("alpha-beta family through M_3 (x) M_2:", w.verified_unitary, w.verified_channel)

# %% [markdown]
# For d = 3 one unitary on M_3 (x) M_3 induces two different channels,
# depending on which factor is traced out.

# %%
phi, psi = d3_pair()
U = d3_dual_unitary("U")
print("trace second factor gives t=-1/2 channel:", verify_exact_factorization(U, phi, 3, "second").verified_channel)
print("trace first factor gives t=1 channel:   ", verify_exact_factorization(U, psi, 3, "first").verified_channel)

# %% [markdown]
# Any channel with at most four Kraus operators has Phi o Phi^* factorizable
# through M_d (x) M_4, including the non-factorizable rank-four qutrit map.

# %%
AO = build_family(FamilySpec("arveson_ohno"))
U4 = build_named_unitary("choi4_square", AO)
print("Phi o Phi^* factorizes:", verify_exact_factorization(U4, composed_channel(AO), 4).verified_channel)
print("non-factorizability premises hold:", arveson_ohno_premises()["all"])

# %% [markdown]
# The condition system for the d = 4 special channel: a candidate built from
# mutually unbiased bases meets the symmetric conditions but not the
# antisymmetric ones.

# %%
r = d4_condition_check(mub_default())
for k, v in r.items():
    if isinstance(v, bool):
        print(f"  {k:22s} {v}")
