# %% [markdown]
# # Discrete phases and the energy factor xi
#
# With PSK symbols drawn from a p.m.f. `p`, the fourth-order term scales
# with `xi = E{cos(phi0 + phi1 - phi2 - phi3)}`.

# %%
import numpy as np

from asympsk import Constellation, expected_cos_continuous, theta_pmf, uniform_pmf, vertex_pmf, xi

c = Constellation(4, np.pi / 3)
print("phases / pi:", np.round(c.phases / np.pi, 4))

# %%
d = theta_pmf([0.4, 0.3, 0.2, 0.1], c)
for t, q in zip(d.support, d.probs):
    print(f"theta = {t / np.pi:+.3f} pi   p = {q:.5f}")
print("xi =", d.xi)

# %% [markdown]
# A single symbol gives `xi = 1`, a uniform symmetric constellation gives 0.

# %%
print(xi(vertex_pmf(4, 2), c), xi(uniform_pmf(4), Constellation(4, np.pi)))

# %% [markdown]
# Uniform p.m.f.s approach the continuous-phase value as M grows.

# %%
for delta in (np.pi / 6, np.pi / 3, np.pi / 2):
    exact = expected_cos_continuous(delta, "exact")
    gauss = expected_cos_continuous(delta)
    row = [xi(uniform_pmf(M), Constellation(M, delta)) for M in (4, 8, 16, 64)]
    print(f"delta={delta:.3f}  M=4,8,16,64: {np.round(row, 4)}  exact {exact:.4f}  gaussian {gauss:.4f}")
