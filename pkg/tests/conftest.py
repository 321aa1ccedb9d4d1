import numpy as np
import pytest

from lietransport.kinematics import CATALOG, catalog_flow

FLOW_NAMES = list(CATALOG)


@pytest.fixture(params=FLOW_NAMES)
def flow(request):
    return catalog_flow(request.param)


def sample_points(n, seed=0, half_width=1.0, t_range=(0.0, 1.0)):
    rng = np.random.default_rng(seed)
    ts = rng.uniform(*t_range, size=n)
    xs = rng.uniform(-half_width, half_width, size=(n, 3))
    return list(zip(ts.tolist(), xs))


# criterion number -> verdict line, filled by test_acceptance.py
VERDICTS = {}


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[k])
