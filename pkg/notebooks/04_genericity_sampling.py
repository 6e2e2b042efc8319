# %% [markdown]
# # How often are sampled channels extreme?
#
# Draw the unitaries V_m at random, build the partial-isometry channel and
# test independence of {A_m^* A_n}.  Float trials use a singular-value rank
# at relative tolerance 1e-9; exact trials use rational reflections.

# %%
from ucpt_lab import mpq
from ucpt_lab.sampling import ExperimentConfig, genericity_experiment, rational_unit_projection_family
from ucpt_lab.extremality import set_independence

for mode, t in (("haar_float", 0), ("haar_per_m", 0), ("partition", 0), ("diagonal", 0)):
    r = genericity_experiment(ExperimentConfig(5, t, 40, 1, mode))
    print(f"{mode:12s} fraction independent = {r['independent_fraction']:.2f}")

# %% [markdown]
# At t = -1/(d-1), where the key family fails, reflections through random
# rational directions almost always succeed.

# %%
r = genericity_experiment(ExperimentConfig(4, mpq(-1, 3), 40, 7, "rational_projection"))
print("rational reflections d=4:", r["independent_fraction"], "tolerance incidents:", len(r["tolerance_incidents"]))

# %% [markdown]
# "Almost always" is not "always": whole hyperplanes of directions fail.  At
# d = 4 every z with z_1 = -z_3 gives rank 12, and (2, 1, 1) gives rank 13.

# %%
for z in ((1, 2, 2), (2, 1, -2), (3, -4, -3), (2, 1, 1)):
    v = set_independence(rational_unit_projection_family(4, z, mpq(-1, 3)), "AstarA")
    print(z, "rank", v.rank, "independent" if v.independent else "dependent")
