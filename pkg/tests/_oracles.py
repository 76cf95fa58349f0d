"""Independent reference computations used by the test suite.

Everything here is deliberately written against the problem statements, not
against the package internals, so agreement is meaningful: dumb grids, plain
quadrature, and one closed form that only exists for orthogonal channels.
"""

import numpy as np
from scipy.integrate import quad


def cn_vector(rng, m, var):
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return np.sqrt(var / 2.0) * z


def orthogonal_pair_optimum(h1, h2, power, noise_var):
    """Exact max-min SINR when the two user channels are orthogonal.

    Each beam points straight at its user, there is no cross term, and the
    optimum splits power to equalize p_i ||h_i||^2 / noise_var.
    """
    n1 = float(np.linalg.norm(h1) ** 2)
    n2 = float(np.linalg.norm(h2) ** 2)
    return power * n1 * n2 / (noise_var * (n1 + n2))


def brute_force_m2(h1, h2, power, noise_var, n_theta=141, n_alpha=161):
    """Grid search over rank-1 beam pairs for two antennas.

    Beam i is parameterized as sqrt(p_i) (cos(th) u_i + sin(th) e^{j phi} v_i)
    with u_i the unit own-channel direction and v_i its orthogonal complement.
    The mixing phase phi only enters the single cross term, so its optimal
    value is the one that anti-aligns the two contributions; that reduces the
    search to (th_1, th_2, power split).
    """
    h1 = np.asarray(h1, dtype=complex).reshape(-1)
    h2 = np.asarray(h2, dtype=complex).reshape(-1)

    def directions(h):
        u = h / np.linalg.norm(h)
        v = np.array([-np.conj(u[1]), np.conj(u[0])])
        return u, v

    u1, v1 = directions(h1)
    u2, v2 = directions(h2)
    n1 = np.linalg.norm(h1) ** 2
    n2 = np.linalg.norm(h2) ** 2
    # |h_j^H (cos u_i + sin e^{j phi} v_i)| minimized over phi
    a21, c21 = abs(np.vdot(h2, u1)), abs(np.vdot(h2, v1))
    a12, c12 = abs(np.vdot(h1, u2)), abs(np.vdot(h1, v2))

    th = np.linspace(0.0, np.pi / 2.0, n_theta)
    ct, st = np.cos(th), np.sin(th)
    sig1 = n1 * ct ** 2                  # times p1: signal at user 1
    sig2 = n2 * ct ** 2
    i21 = (a21 * ct - c21 * st) ** 2     # times p1: interference at user 2
    i12 = (a12 * ct - c12 * st) ** 2

    best = 0.0
    for alpha in np.linspace(0.0, 1.0, n_alpha):
        p1, p2 = alpha * power, (1.0 - alpha) * power
        s1 = p1 * sig1[:, None] / (noise_var + p2 * i12[None, :])
        s2 = p2 * sig2[None, :] / (noise_var + p1 * i21[:, None])
        best = max(best, float(np.minimum(s1, s2).max()))
    return best


def numeric_cdf_from_pdf(pdf, c, lo=-np.inf):
    """Plain quadrature of a density, split at zero where ours has a kink."""
    if c <= 0:
        val, _ = quad(pdf, lo, c, limit=400)
        return val
    neg, _ = quad(pdf, lo, 0.0, limit=400)
    pos, _ = quad(pdf, 0.0, c, limit=400)
    return neg + pos
