# %% [markdown]
# # Expression-defined flows and the check harness
#
# Flows and fields can be written as strings.  A velocity with no known
# inverse map is integrated along trajectories.

# %%
from lietransport import fieldexpr
from lietransport.harness import config_from_dict, list_catalog, run_suite

e = fieldexpr.parse("exp(-3*a*t) * sin(x1)^2", ["a"])
print(fieldexpr.pretty(e))
print(fieldexpr.evaluate(e, 0.2, (1.0, 0.0, 0.0), {"a": 0.5}))

try:
    fieldexpr.parse("x1*(2+")
except fieldexpr.ParseError as exc:
    print(exc)

# %% [markdown]
# The harness runs named checks against one flow.  This is what the
# `lietransport check` command does with a TOML file.

# %%
print(list_catalog(filter_text="kelvin"))

config = config_from_dict({
    "flow": {"name": "wavy", "params": {"b": 0.8},
             "velocity": ["b*sin(x2)", "0", "0"],
             "forward": ["x1 + b*t*sin(x2)", "x2", "x3"],
             "inverse": ["x1 - b*t*sin(x2)", "x2", "x3"]},
    "fields": [{"name": "tracer", "variance": "scalar", "components": ["x1*x2"], "frame": "reference"},
               {"name": "plain", "variance": "scalar", "components": ["x1*x2"]}],
    "checks": ["mass", "kelvin", "fields"],
    "sampling": {"points": 20, "seed": 1},
})
for report in run_suite(config):
    print(report.summary())

# %% [markdown]
# The fields check fails on purpose: "plain" is a fixed Eulerian field, not
# one carried by the flow.
