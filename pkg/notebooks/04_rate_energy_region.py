# %% [markdown]
# # Rate-energy boundary
#
# For each rate bound R the symbol p.m.f. maximizes `xi` subject to
# `I(X;Y) >= R`.  The local SQP solution is checked against an exhaustive
# lattice search.

# %%
import numpy as np

from asympsk import AwgnChannel, Constellation, EnergyParams, esm_table, sweep_region
from asympsk.region import rate_grid

ch = AwgnChannel.from_db(20)
e = EnergyParams()
c = Constellation(4, np.pi / 3)
grid = rate_grid(c, ch, 11)
pts = sweep_region(grid, c, ch, e)
table = esm_table(c, ch, 0.02)

print(f"{'R':>6} {'zdc uA':>8} {'xi':>7} {'xi ESM':>7}  p")
for R, pt in zip(grid, pts):
    esm = table.best(R, e)
    print(f"{R:6.3f} {pt.zdc * 1e6:8.4f} {pt.xi:7.4f} {esm.xi:7.4f}  {np.round(pt.pmf, 3)}")

# %% [markdown]
# Low rates keep one dominant symbol with its two neighbours equal; high
# rates pair the outer and the inner symbols.  Smaller phase ranges trade
# maximum rate for energy:

# %%
for delta in (np.pi / 6, np.pi / 4, np.pi / 2):
    cc = Constellation(4, delta)
    g = rate_grid(cc, ch, 5)
    row = [p.zdc * 1e6 for p in sweep_region(g, cc, ch, e)]
    print(f"delta={delta:.3f}  R_max={g[-1]:.3f}  zdc along boundary: {np.round(row, 3)}")
