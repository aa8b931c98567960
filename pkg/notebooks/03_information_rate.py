# %% [markdown]
# # Mutual information of a limited-range 4PSK
#
# Continuous-output `I(X;Y)` over complex AWGN for several phase ranges,
# and the Blahut-Arimoto input for the hard-decision phase channel.

# %%
import numpy as np

from asympsk import AwgnChannel, Constellation, ba_optimal_input, mutual_information, uniform_pmf

snrs = np.arange(-10, 31, 5)
for delta in (np.pi / 12, np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2, np.pi):
    c = Constellation(4, delta)
    I = [mutual_information(uniform_pmf(4), c, AwgnChannel.from_db(s)) for s in snrs]
    print(f"delta={delta:.3f}: " + " ".join(f"{v:.3f}" for v in I))

# %% [markdown]
# At 10 dB with `delta = pi/4` the outer symbols gain probability; at 20 dB
# the optimum returns to uniform.

# %%
c = Constellation(4, np.pi / 4)
for s in (10, 20):
    ch = AwgnChannel.from_db(s)
    cap, p, dmc = ba_optimal_input(c, ch)
    print(f"{s} dB  p = {np.round(p, 4)}  DMC capacity {cap:.4f}  "
          f"I(uniform) {mutual_information(uniform_pmf(4), c, ch):.4f}  I(p) {mutual_information(p, c, ch):.4f}")
