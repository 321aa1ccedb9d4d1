# %% [markdown]
# # Circulation, flux and mass over material sets
#
# Integrate transported fields over curves, surfaces and volumes that move
# with the fluid.  The integrals stay constant in time.

# %%
import math

import numpy as np

from lietransport import Variance, catalog_flow, transported_field
from lietransport.integrals import box, circle, circulation, disk, flux, invariance_drift, observed_order, volume_integral
from lietransport.suites import default_mass
from lietransport.tensors import density_field

times = [0.0, 0.25, 0.5, 0.75, 1.0]

# %% [markdown]
# Rigid rotation carrying its own initial velocity as a covector: the
# circulation around the unit circle is 2 pi at every time.

# %%
rot = catalog_flow("rotation")
C = transported_field(rot, Variance.COVECTOR, lambda X: np.array([-X[1], X[0], 0.0]))
values = [circulation(C, rot, circle(n_segments=512), t) for t in times]
print([f"{q:.12f}" for q in values], "2 pi =", f"{2 * math.pi:.12f}")

# %% [markdown]
# In the expansion flow a uniform 2-form thins out as the disk grows.  The
# flux stays at pi.

# %%
ex = catalog_flow("expansion", a=1.0)
W = transported_field(ex, Variance.TWO_FORM, lambda X: np.array([0.0, 0.0, 1.0]))
print([round(flux(W, ex, disk(n1=32, n2=32), t), 12) for t in (0.0, 0.3, 0.7)])

# %% [markdown]
# The midpoint rule is second order.  A Gaussian 2-form makes the error
# visible (a uniform one is integrated exactly).

# %%
G = transported_field(ex, Variance.TWO_FORM, lambda X: np.array([0.0, 0.0, math.exp(-X[0] ** 2 - X[1] ** 2)]))
exact = math.pi * (1 - math.exp(-1))
errors = [abs(flux(G, ex, disk(n1=n, n2=n), 0.3) - exact) for n in (8, 16, 32)]
print("errors:", errors, "orders:", observed_order(errors))

# %% [markdown]
# Mass inside a material cube.

# %%
cascade = catalog_flow("cascade")
rho = density_field(default_mass(cascade))
print("mass drift:", invariance_drift(lambda t: volume_integral(rho, cascade, box(n=12), t), times))
