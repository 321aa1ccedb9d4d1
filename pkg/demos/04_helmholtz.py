# %% [markdown]
# # Vorticity as a frozen-in 2-form
#
# The Helmholtz residual is the 2-form Lie derivative of the vorticity.  It
# vanishes when vortex lines move with the fluid.

# %%
import numpy as np

from lietransport import catalog_flow, helmholtz_residual, specific_vorticity_residual, vorticity
from lietransport.kinematics import mass_density
from lietransport.suites import default_mass

x = np.array([0.2, -0.4, 0.7])
for name in ("rotation", "shear", "cascade"):
    flow = catalog_flow(name)
    r = helmholtz_residual(flow, 0.5, x)
    print(f"{name:<9} omega = {vorticity(flow, 0.5, x)}  residual = {r.value.data}")

# %% [markdown]
# For u = (x2, x3, 0) the vorticity (-1, 0, -1) is constant, but the flow
# stretches it: the residual is exactly -L omega = (0, 1, 0).

# %%
r = helmholtz_residual(catalog_flow("cascade"), 0.5, x)
for part, value in r.parts.items():
    print(f"  {part:<11} {value}")

# %% [markdown]
# Dividing by a convected density gives a vector law for omega / rho.
# Multiplied back by rho it reproduces the residual above.

# %%
flow = catalog_flow("cascade")
mass = default_mass(flow)
print(mass_density(mass, 0.5, x) * specific_vorticity_residual(flow, mass, 0.5, x))
print(helmholtz_residual(flow, 0.5, x).value.data)
