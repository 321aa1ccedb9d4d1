# %% [markdown]
# # Clebsch potentials, charge and the induction equation

# %%
import numpy as np

from lietransport import MassField, Variance, catalog_flow, eulerian_field, transported_field
from lietransport.conservation import (
    ChargeField,
    charge_conservation_residual,
    clebsch_data,
    clebsch_verify,
    induction_residual,
)

shear = catalog_flow("shear", gamma=2.0)
rng = np.random.default_rng(5)
samples = [(rng.uniform(0, 1), rng.uniform(-1, 1, 3)) for _ in range(20)]

# %% [markdown]
# rho J = f(s, eta) grad s x grad eta with both potentials moving with the
# fluid.  Every residual is at truncation level.

# %%
s = eulerian_field(Variance.SCALAR, lambda t, x: x[2], "s")
eta = eulerian_field(Variance.SCALAR, lambda t, x: x[0] - 2.0 * t * x[1], "eta")
good = clebsch_verify(clebsch_data(lambda a, b: 1.0, s, eta), MassField(lambda X: 1.0, shear), shear, samples)
print(good.summary())
print(good.details["max_by_check"])

# %% [markdown]
# With eta = x1, which the shear does not carry, d(eta)/dt = gamma x2.

# %%
bad_eta = eulerian_field(Variance.SCALAR, lambda t, x: x[0], "eta")
bad = clebsch_verify(clebsch_data(lambda a, b: 1.0, s, bad_eta), MassField(lambda X: 1.0, shear), shear, samples)
print(bad.summary(), "failed:", bad.details["failed"])
smp = bad.samples[0]
print("d(eta)/dt =", smp.residual[3], " gamma * x2 =", 2.0 * smp.x[1])

# %% [markdown]
# Convected charge q = q0 / det F obeys a divergence-form law.

# %%
ex = catalog_flow("expansion", a=0.5)
q = ChargeField(lambda X: 1.0 + X[0] ** 2, ex)
print(max(abs(charge_conservation_residual(q, t, x)) for t, x in samples))

# %% [markdown]
# A magnetic field transported as a 2-form satisfies the induction equation.
# Holding H = e3 fixed while the fluid expands leaves a residual 2 a e3.

# %%
H = transported_field(ex, Variance.TWO_FORM, lambda X: np.array([0.0, 0.0, 1.0]))
e3 = eulerian_field(Variance.TWO_FORM, lambda t, x: np.array([0.0, 0.0, 1.0]))
t, x = samples[0]
print(induction_residual(H, ex, t, x).residual, induction_residual(e3, ex, t, x).residual)
