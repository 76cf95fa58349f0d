"""Relay beamforming when exactly one user needs a retransmission.

The relay retransmits to the failed user while the other cell's BS serves
its own user with a fresh message. The relay therefore steers all of its
power at the failed user's channel subject to radiating nothing toward the
protected user:

    maximize ||B^H g_target||^2
    s.t.     B^H g_protect = 0,   tr(B B^H) = Pr.

Stacking columns turns the zero-forcing constraint into (I kron g_p^H)
vec(B) = 0, whose null space is I kron U with U an orthonormal basis of the
complement of g_protect. The objective restricted to that subspace is block
diagonal, so the optimum is rank one: one column carrying sqrt(Pr) times
the unit projection of g_target onto U, the rest zero. Its value is
Pr ||P_perp g_target||^2 with P_perp the projector orthogonal to g_protect.

``solve_single_user_beamformer`` implements that closed form directly;
``solve_single_user_beamformer_full`` solves the stacked MN-dimensional
eigenproblem instead and is kept as a cross-check of the reduction.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, SystemConfig
from .errors import DegenerateInputError, DimensionError
from .linalg import conjT, herm_eig, kron_identity, null_basis, unvec, vec

DEGENERATE_GAIN = 1e-12   # squared projection below this counts as unservable


@dataclass(frozen=True)
class Beamformer:
    """Relay transmit beamformer with bookkeeping for its design contract.

    matrix         M x N complex beamforming matrix
    power          tr(B B^H), equals the relay power budget
    null_residual  ||B^H g_protect|| achieved by the design
    degenerate     True when g_target lies in span(g_protect), in which case
                   the objective is ~0 and the returned matrix is an
                   arbitrary unit-power direction inside the null space
    """

    matrix: np.ndarray
    power: float
    null_residual: float
    degenerate: bool = False


def beamform_gain(b: np.ndarray, g: np.ndarray) -> float:
    """||B^H g||^2."""
    return float(np.linalg.norm(conjT(b) @ np.asarray(g).reshape(-1)) ** 2)


def solve_single_user_beamformer(g_protect: np.ndarray, g_target: np.ndarray,
                                 power: float, n_streams: int = 1) -> Beamformer:
    """Optimal zero-forcing beamformer, closed form.

    The optimum is rank one, so all power sits in the first column; the
    remaining n_streams - 1 columns are zero. Objective value equals
    power * ||P_perp g_target||^2 (projector orthogonal to g_protect).
    """
    g_protect = np.asarray(g_protect, dtype=complex).reshape(-1)
    g_target = np.asarray(g_target, dtype=complex).reshape(-1)
    m = g_protect.size
    if g_target.size != m:
        raise DimensionError("channel vectors must share the antenna count")
    if m < 2:
        raise DegenerateInputError(
            "zero-forcing toward one user needs at least two relay antennas")
    if power <= 0:
        raise DegenerateInputError("relay power must be positive")
    u = null_basis(g_protect)                 # M x (M-1), orthonormal
    w = conjT(u) @ g_target
    gain = float(np.vdot(w, w).real)
    b = np.zeros((m, n_streams), dtype=complex)
    if gain <= DEGENERATE_GAIN * float(np.vdot(g_target, g_target).real + 1.0):
        b[:, 0] = np.sqrt(power) * u[:, 0]
        degenerate = True
    else:
        b[:, 0] = np.sqrt(power) * (u @ (w / np.sqrt(gain)))
        degenerate = False
    resid = float(np.linalg.norm(conjT(b) @ g_protect))
    return Beamformer(matrix=b, power=float(np.trace(b @ conjT(b)).real),
                      null_residual=resid, degenerate=degenerate)


def solve_single_user_beamformer_full(g_protect: np.ndarray, g_target: np.ndarray,
                                      power: float, n_streams: int) -> Beamformer:
    """Same optimum through the stacked MN-dimensional eigenproblem.

    Builds V = I kron U spanning the zero-forcing subspace, takes the top
    eigenvector of V^H (I kron g_t g_t^H) V, and unstacks. Exercised by
    tests against the closed form; the production path never calls it.
    """
    g_protect = np.asarray(g_protect, dtype=complex).reshape(-1)
    g_target = np.asarray(g_target, dtype=complex).reshape(-1)
    m = g_protect.size
    if m < 2:
        raise DegenerateInputError(
            "zero-forcing toward one user needs at least two relay antennas")
    u = null_basis(g_protect)
    v = kron_identity(n_streams, u)           # MN x (M-1)N
    target_outer = np.outer(g_target, g_target.conj())
    a = conjT(v) @ kron_identity(n_streams, target_outer) @ v
    eig = herm_eig(a)
    b_stacked = np.sqrt(power) * (v @ eig.eigenvectors[:, 0])
    b = unvec(b_stacked, m, n_streams)
    resid = float(np.linalg.norm(conjT(b) @ g_protect))
    return Beamformer(matrix=b, power=float(np.vdot(vec(b), vec(b)).real),
                      null_residual=resid,
                      degenerate=bool(eig.eigenvalues[0] <= DEGENERATE_GAIN))


def optimal_gain(g_protect: np.ndarray, g_target: np.ndarray, power: float) -> float:
    """Analytic optimum power * ||(I - g_p g_p^H / ||g_p||^2) g_target||^2."""
    g_p = np.asarray(g_protect, dtype=complex).reshape(-1)
    g_t = np.asarray(g_target, dtype=complex).reshape(-1)
    np2 = np.vdot(g_p, g_p).real
    if np2 == 0:
        raise DegenerateInputError("protected channel is zero")
    proj = g_t - g_p * (np.vdot(g_p, g_t) / np2)
    return float(power * np.vdot(proj, proj).real)


# ---------------------------------------------------------------------------
# achieved rates during a single-user relay round
# (orientation: user 0 is protected and served by its own BS, user 1 is the
# relay's target; swap the realization's user/BS axes for the mirror case)
# ---------------------------------------------------------------------------

def rate_protected(cfg: SystemConfig, chan: ChannelRealization,
                   bf: Beamformer) -> float:
    """Rate of the BS-served user, with relay leakage as interference."""
    h_own = chan.h[0, 0]
    leak = beamform_gain(bf.matrix, chan.g[0])
    sig = (cfg.P / cfg.N) * float(np.vdot(h_own, h_own).real)
    return float(np.log2(1.0 + sig / (leak + cfg.noise_var)))


def rate_target(cfg: SystemConfig, chan: ChannelRealization,
                bf: Beamformer) -> float:
    """Rate of the relay-served user, with the active BS as interference."""
    sig = beamform_gain(bf.matrix, chan.g[1])
    h_cross = chan.h[1, 0]
    interf = (cfg.P / cfg.N) * float(np.vdot(h_cross, h_cross).real)
    return float(np.log2(1.0 + sig / (interf + cfg.noise_var)))
