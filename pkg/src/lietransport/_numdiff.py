"""Central finite-difference stencils on R^3 and in time.

Default steps give O(h^2) ~ 1e-8 truncation for O(1) smooth fields while
keeping round-off (~eps/h) near 1e-12.
"""

import numpy as np

H_SPACE = 1e-4
H_TIME = 1e-4

_E = np.eye(3)


def jacobian(f, x, h=H_SPACE):
    """Partials of ``f`` at ``x``; result has shape ``f(x).shape + (3,)``,
    the last axis indexing the differentiation direction."""
    x = np.asarray(x, dtype=float)
    cols = [(np.asarray(f(x + h * e)) - np.asarray(f(x - h * e))) / (2.0 * h) for e in _E]
    return np.stack(cols, axis=-1)


def gradient(f, x, h=H_SPACE):
    return jacobian(f, x, h)


def divergence(f, x, h=H_SPACE):
    return float(np.trace(jacobian(f, x, h)))


def curl_from_jacobian(J):
    """Curl of a vector field from its Jacobian ``J[i, j] = d f_i / d x_j``."""
    return np.array([J[2, 1] - J[1, 2], J[0, 2] - J[2, 0], J[1, 0] - J[0, 1]])


def curl(f, x, h=H_SPACE):
    return curl_from_jacobian(jacobian(f, x, h))


def time_derivative(g, t, h=H_TIME):
    return (np.asarray(g(t + h)) - np.asarray(g(t - h))) / (2.0 * h)
