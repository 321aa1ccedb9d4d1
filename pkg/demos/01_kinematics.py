# %% [markdown]
# # Flow maps and the deformation gradient
#
# A flow map sends a reference point X to its position x = phi_t(X).  Its
# Jacobian F = dx/dX carries every tensor quantity in this package.  Here we
# compute F three ways for the catalog shear flow and check they agree.

# %%
import numpy as np

from lietransport import catalog_flow, deformation_gradient, evolve_deformation, velocity_gradient

shear = catalog_flow("shear", gamma=2.0)
X = np.array([0.3, -0.5, 1.0])
print(shear.description)
print("x at t=0.5:", shear.forward(0.5, X))

# %% [markdown]
# The velocity gradient L = du/dx is constant for this linear flow.

# %%
print(velocity_gradient(shear, 0.5, shear.forward(0.5, X)))

# %% [markdown]
# Closed form, central differences of the map, and RK4 on dF/dt = L F.

# %%
F_exact = deformation_gradient(shear, 1.0, X, "analytic").F
F_fd = deformation_gradient(shear, 1.0, X, "finite_difference").F
F_ode = evolve_deformation(shear, X, 1.0, dt=1e-3).F
print(F_exact)
print("FD error :", np.linalg.norm(F_fd - F_exact))
print("RK4 error:", np.linalg.norm(F_ode - F_exact))

# %% [markdown]
# In the expansion flow volumes grow like exp(3 a t), so a density that moves
# with the fluid decays at the same rate.

# %%
from lietransport import MassField, mass_density

expansion = catalog_flow("expansion", a=1.0)
D = deformation_gradient(expansion, np.log(2.0), X)
print("det F at t = ln 2:", D.det_F)
print("density with rho0 = 1:", mass_density(MassField(lambda X: 1.0, expansion), np.log(2.0), [0, 0, 0]))
