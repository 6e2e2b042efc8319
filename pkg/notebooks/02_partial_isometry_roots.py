# %% [markdown]
# # Where partial-isometry channels stop being extreme
#
# A_m = t |e_m><e_m| + (a unitary on the complement of e_m).  Independence of
# {A_m^* A_n} is a polynomial condition in t: the Gram determinant and the
# determinant of the stacked products vanish at finitely many t, unless they
# vanish identically.

# %%
from ucpt_lab import FamilySpec, gram_det_poly, mpq, set_independence, build_family, vec_det_poly
from ucpt_lab.omega import special_t_relations

for d in (3, 4):
    g = gram_det_poly(FamilySpec("key", d, "t"))
    v = vec_det_poly(FamilySpec("key", d, "t"))
    print(f"d={d}: deg Gram det {g.degree}, deg vec det {v.degree}")
    print("   exact roots:", [(str(r), m) for r, m in v.exact_roots])
    print("   inside (-1, 1):", [str(r) for r in v.roots_in_interval])

# %% [markdown]
# The only interior root is t = -1/(d-1).  There, a dependence appears, and
# the products satisfy explicit commutator identities.

# %%
d = 5
K = build_family(FamilySpec("key", d, mpq(-1, d - 1)))
verdict = set_independence(K, "AstarA")
print("rank", verdict.rank, "of", verdict.expected, "- witness verified:", verdict.witness_verified)
rep = special_t_relations(d)
for ident in rep.identities:
    print(f"  {ident['name']:28s} holds={ident['holds']} over {ident['instances']} instances")
print("  span dimension:", rep.facts["span_dimension"], "= 3d - 2 =", 3 * d - 2)

# %% [markdown]
# An even-dimensional variant is dependent for every t.

# %%
print("even family d=4 identically zero:", gram_det_poly(FamilySpec("even_skew", 4, "t")).identically_zero)

# %% [markdown]
# A 4x4 example with a non-symmetric orthogonal matrix separates the two
# one-sided criteria: at t = -1/7 the products A^*A stay independent while
# the products A A^* do not.

# %%
for kind in ("AstarA", "AAstar"):
    r = vec_det_poly(FamilySpec("asymmetric_w", 4, "t"), kind, (-10, 10))
    print(kind, sorted(str(x) for x in r.exact_root_set()))
