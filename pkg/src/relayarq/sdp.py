"""Feasibility oracle for the relaxed max-min SINR design.

One bisection probe asks: at SINR target t, do PSD covariances X1, X2 exist
with

    tr(C_i X_i) >= t (tr(C_i X_j) + noise_var),   i != j,
    tr(X1) + tr(X2) <= power,

where C_i encodes user i's relay channel. The question is answered through
its phase-I form: maximize a common slack s subject to the two SINR rows
holding with margin s. The target is feasible exactly when the optimal
slack is nonnegative.

The solver is a primal log-barrier interior-point method. Hermitian
variables are parameterized by real coordinates (diagonal, then real and
imaginary off-diagonal parts), Newton systems are assembled dense, and the
barrier weight follows mu <- mu/10 from mu = 1 until the duality measure
mu (2 dim + 3) drops below ``tol``. Problem data is scale-normalized first
(channels by the largest spectral norm, powers by the budget), so the
feasibility margin applies to a dimensionless slack.

With ``verdict_only=True`` the solve may finish early, checked at the end
of each centering stage: an interior point with positive slack proves
feasibility outright, and s + 1.5 mu nu below the margin certifies
infeasibility through the duality gap bound s* <= s_centered + mu nu.
Bisection uses this mode for probes and a full-precision pass for the
final certificate.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import cho_solve

from .errors import ContractViolationError, NumericFailureError

FEAS_MARGIN = 1e-9        # on the normalized slack
ARMIJO = 0.25
MAX_NEWTON_PER_STAGE = 60
GAP_SAFETY = 1.5          # slack on the mu*nu duality bound at a centered point


@dataclass(frozen=True)
class SdpInstance:
    """Data of one feasibility probe."""

    dim: int
    C1: np.ndarray
    C2: np.ndarray
    t: float
    noise_var: float
    power: float

    def __post_init__(self):
        for name, c in (("C1", self.C1), ("C2", self.C2)):
            c = np.asarray(c)
            if c.shape != (self.dim, self.dim):
                raise ContractViolationError(f"{name} must be {self.dim}x{self.dim}")
            if np.linalg.norm(c - c.conj().T) > 1e-10 * max(1.0, np.linalg.norm(c)):
                raise ContractViolationError(f"{name} must be Hermitian")
            w = np.linalg.eigvalsh((c + c.conj().T) / 2)
            if w[0] < -1e-10 * max(1.0, w[-1]):
                raise ContractViolationError(f"{name} must be PSD")
        if self.t < 0:
            raise ContractViolationError("SINR target must be nonnegative")
        if self.noise_var <= 0 or self.power <= 0:
            raise ContractViolationError("noise and power must be positive")


@dataclass(frozen=True)
class SdpOutcome:
    """Solver verdict plus the certificate matrices (physical units).

    On a feasible verdict X1, X2 satisfy every constraint with margin
    ``slack`` (early exits report the slack actually proven, which can
    undershoot the optimum). On an infeasible verdict the matrices are
    just the final iterate.
    """

    status: str               # "feasible" or "infeasible"
    X1: np.ndarray
    X2: np.ndarray
    slack: float              # max-slack in physical units
    normalized_slack: float   # slack after internal scaling; margin applies here
    iterations: int
    mu: float = 0.0           # barrier weight at exit; a resume hint

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


# ---------------------------------------------------------------------------
# real parameterization of Hermitian matrices
# ---------------------------------------------------------------------------

_BASIS_CACHE: dict = {}


def _basis(d: int):
    """Index bookkeeping for the theta <-> Hermitian maps, cached per size."""
    if d not in _BASIS_CACHE:
        iu = np.triu_indices(d, 1)
        n_off = iu[0].size
        p = np.zeros((d * d, d * d), dtype=complex)
        for a in range(d):
            p[a + a * d, a] = 1.0
        for k in range(n_off):
            i, j = int(iu[0][k]), int(iu[1][k])
            p[i + j * d, d + k] = 1.0
            p[j + i * d, d + k] = 1.0
            p[i + j * d, d + n_off + k] = 1j
            p[j + i * d, d + n_off + k] = -1j
        _BASIS_CACHE[d] = (iu, p)
    return _BASIS_CACHE[d]


def _mat(theta: np.ndarray, d: int, iu) -> np.ndarray:
    n_off = iu[0].size
    x = np.zeros((d, d), dtype=complex)
    x[np.arange(d), np.arange(d)] = theta[:d]
    off = theta[d:d + n_off] + 1j * theta[d + n_off:]
    x[iu] = off
    x[iu[1], iu[0]] = off.conj()
    return x


def _theta(g: np.ndarray, d: int, iu) -> np.ndarray:
    """Gradient map: theta_a = Re tr(G E_a) for the basis above."""
    return np.concatenate((np.diag(g).real, 2.0 * g[iu].real, 2.0 * g[iu].imag))


def _logdet_hessian(y: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Matrix of the form tr(Y Delta Y Delta) over theta coordinates."""
    d = y.shape[0]
    # kron(conj(y), y) spelled out; np.kron is slow at these sizes
    k = (y.conj()[:, None, :, None] * y[None, :, None, :]).reshape(d * d, d * d)
    return (p.conj().T @ k @ p).real


def _chol_logdet(m):
    try:
        ell = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return None, 0.0
    return ell, 2.0 * np.log(np.diag(ell).real).sum()


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

def solve_feasibility(inst: SdpInstance, tol: float = 1e-8,
                      verdict_only: bool = False,
                      warm_start: Optional[SdpOutcome] = None) -> SdpOutcome:
    """Run the phase-I barrier method on one probe.

    ``warm_start`` reuses the certificate of a nearby probe (same dim and
    power, slightly different t) as the initial iterate; it is ignored
    whenever the warmed point is not strictly interior. Raises
    NumericFailureError (with an iteration trace attached) if Newton
    centering stalls, which callers may retry with a looser tol.
    """
    d = int(inst.dim)
    iu, p_basis = _basis(d)
    dd = d * d
    n = 2 * dd + 1

    c_scale = max(float(np.linalg.eigvalsh(inst.C1)[-1]),
                  float(np.linalg.eigvalsh(inst.C2)[-1]), 1e-300)
    c1 = np.asarray(inst.C1, dtype=complex) / c_scale
    c2 = np.asarray(inst.C2, dtype=complex) / c_scale
    t = float(inst.t)
    sig = inst.noise_var / (inst.power * c_scale)   # noise in normalized units

    # SINR rows are rescaled by 1/(1+t) so their entries stay O(1) against
    # the slack column no matter how large the target; without this the
    # Newton system loses definiteness around t ~ 1e6
    row_scale = 1.0 + t
    eye = np.eye(d)
    a1 = np.concatenate((_theta(c1, d, iu) / row_scale,
                         _theta(-t * c1, d, iu) / row_scale, [-1.0]))
    a2 = np.concatenate((_theta(-t * c2, d, iu) / row_scale,
                         _theta(c2, d, iu) / row_scale, [-1.0]))
    a3 = np.concatenate((_theta(-eye, d, iu), _theta(-eye, d, iu), [0.0]))
    a_rows = np.vstack((a1, a2, a3))

    def gaps_of(m1, m2, s):
        g1 = (np.vdot(c1, m1).real - t * np.vdot(c1, m2).real - t * sig) \
            / row_scale - s
        g2 = (np.vdot(c2, m2).real - t * np.vdot(c2, m1).real - t * sig) \
            / row_scale - s
        g3 = 1.0 - np.trace(m1).real - np.trace(m2).real
        return np.array([g1, g2, g3])

    def fresh_start():
        th = np.zeros(n)
        x_diag = 1.0 / (2 * d * 1.1)
        th[:d] = x_diag
        th[dd:dd + d] = x_diag
        m1 = _mat(th[:dd], d, iu)
        m2 = _mat(th[dd:2 * dd], d, iu)
        row = gaps_of(m1, m2, 0.0)
        th[-1] = min(row[0], row[1]) - 0.1 * (1.0 + abs(min(row[0], row[1])))
        return th, m1, m2, 1.0

    theta = None
    if warm_start is not None and warm_start.X1.shape == (d, d):
        # resume from the nearby probe's iterate with a slightly raised
        # barrier weight, nudged off the power boundary if it sits there
        w1 = np.asarray(warm_start.X1, dtype=complex) / inst.power
        w2 = np.asarray(warm_start.X2, dtype=complex) / inst.power
        used = np.trace(w1).real + np.trace(w2).real
        if used >= 1.0 - 1e-9:
            w1 *= (1.0 - 1e-6) / used
            w2 *= (1.0 - 1e-6) / used
        l1w, _ = _chol_logdet(w1)
        l2w, _ = _chol_logdet(w2)
        if l1w is not None and l2w is not None:
            if warm_start.mu > 0:
                mu0 = min(max(3.0 * warm_start.mu, tol / (2 * d + 3)), 1.0)
            else:
                mu0 = 1e-3
            row = gaps_of(w1, w2, 0.0)
            th = np.empty(n)
            th[:dd] = _pack(w1, d, iu)
            th[dd:2 * dd] = _pack(w2, d, iu)
            th[-1] = min(row[0], row[1]) - 2.0 * mu0
            theta, x1, x2, mu = th, w1, w2, mu0
    if theta is None:
        theta, x1, x2, mu = fresh_start()

    nu = 2 * d + 3                       # total barrier parameter
    e_s = np.zeros(n)
    e_s[-1] = 1.0
    total_iters = 0
    backoffs = 0
    trace = []

    g = gaps_of(x1, x2, theta[-1])
    l1, ld1 = _chol_logdet(x1)
    l2, ld2 = _chol_logdet(x2)
    if l1 is None or l2 is None or g.min() <= 0.0:
        theta, x1, x2, mu = fresh_start()
        g = gaps_of(x1, x2, theta[-1])
        l1, ld1 = _chol_logdet(x1)
        l2, ld2 = _chol_logdet(x2)

    def outcome(status, slack_n):
        return SdpOutcome(status=status,
                          X1=_mat(theta[:dd], d, iu) * inst.power,
                          X2=_mat(theta[dd:2 * dd], d, iu) * inst.power,
                          slack=slack_n * row_scale * inst.power * c_scale,
                          normalized_slack=slack_n, iterations=total_iters,
                          mu=mu)

    while True:
        f_val = -theta[-1] - mu * (np.log(g).sum() + ld1 + ld2)
        for it in range(MAX_NEWTON_PER_STAGE):
            y1 = cho_solve((l1, True), eye, check_finite=False)
            y2 = cho_solve((l2, True), eye, check_finite=False)
            y1 = (y1 + y1.conj().T) / 2
            y2 = (y2 + y2.conj().T) / 2
            grad_logdet = np.concatenate((_theta(y1, d, iu), _theta(y2, d, iu),
                                          [0.0]))
            grad = -e_s - mu * (a_rows.T @ (1.0 / g) + grad_logdet)
            hess = (a_rows.T * (mu / g**2)) @ a_rows
            hess[:dd, :dd] += mu * _logdet_hessian(y1, p_basis)
            hess[dd:2 * dd, dd:2 * dd] += mu * _logdet_hessian(y2, p_basis)
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                hess[np.arange(n), np.arange(n)] += 1e-12 * np.trace(hess) / n
                step = np.linalg.solve(hess, -grad)
            decrement = float(-grad @ step)
            total_iters += 1
            trace.append((mu, it, f_val, decrement))
            if decrement < 0:
                # a tiny negative value is the roundoff floor of g^T H^-1 g
                # at an already-centered point; anything larger is a real
                # loss of definiteness
                if abs(decrement) / 2 <= 1e-6 * (1.0 + abs(f_val)):
                    break
                raise NumericFailureError("Newton direction is not a descent",
                                          details={"trace": trace})
            if decrement / 2 <= 1e-10 * (1.0 + abs(f_val)):
                break

            dm1 = _mat(step[:dd], d, iu)
            dm2 = _mat(step[dd:2 * dd], d, iu)
            slopes = a_rows @ step
            gdir = float(grad @ step)
            alpha = 1.0
            accepted = False
            for _ in range(60):
                g_try = g + alpha * slopes
                if g_try.min() > 0.0:
                    m1 = x1 + alpha * dm1
                    m2 = x2 + alpha * dm2
                    l1t, ld1t = _chol_logdet(m1)
                    l2t, ld2t = _chol_logdet(m2)
                    if l1t is not None and l2t is not None:
                        f_try = (-(theta[-1] + alpha * step[-1])
                                 - mu * (np.log(g_try).sum() + ld1t + ld2t))
                        if f_try <= f_val + ARMIJO * alpha * gdir:
                            theta = theta + alpha * step
                            x1, x2, g = m1, m2, g_try
                            l1, ld1, l2, ld2 = l1t, ld1t, l2t, ld2t
                            f_val = f_try
                            accepted = True
                            break
                alpha *= 0.5
            if not accepted:
                if decrement / 2 <= 1e-6 * (1.0 + abs(f_val)):
                    break                # already essentially centered
                raise NumericFailureError("line search stalled",
                                          details={"trace": trace})
        else:
            # a warm point far from this stage's center makes Newton crawl
            # when the barrier weight is already stiff; relax the weight
            # and re-center instead of giving up
            if backoffs < 2:
                backoffs += 1
                mu *= 30.0
                continue
            raise NumericFailureError("Newton centering did not converge",
                                      details={"trace": trace})
        if verdict_only:
            if theta[-1] > FEAS_MARGIN:
                # interior point with positive slack: constructive proof
                return outcome("feasible", float(theta[-1]))
            if theta[-1] + GAP_SAFETY * mu * nu < -FEAS_MARGIN:
                return outcome("infeasible", float(theta[-1]))
        if mu * nu <= tol:
            break
        mu /= 10.0

    slack_n = float(theta[-1])
    status = "feasible" if slack_n >= -FEAS_MARGIN else "infeasible"
    return outcome(status, slack_n)


def _pack(m: np.ndarray, d: int, iu) -> np.ndarray:
    """Coordinates of a Hermitian matrix (inverse of _mat)."""
    return np.concatenate((np.diag(m).real, m[iu].real, m[iu].imag))
