"""The one-dimensional planar Bratu boundary-value problem.

    u'' + lambda * e^u = 0 on [0, 1],   u(0) = u(1) = 0

With U(k) the Taylor coefficients of u about 0, U(0) = 0 and U(1) = gamma
(the unknown initial slope), the equation turns into a recurrence. Carrying
the exponential explicitly ("exp path"):

    W(0) = e^{U(0)}
    W(k) = (1/k) * sum_{j=1}^{k} j * U(j) * W(k-j)
    U(k+2) = -lambda * W(k) / ((k+1)(k+2))

Substituting W(k) = -(k+1)(k+2) U(k+2) / lambda eliminates W:

    U(2)   = -(lambda/2) * e^{U(0)}
    U(k+2) = 1/(k(k+1)(k+2)) * sum_{j=1}^{k} j (k-j+1)(k-j+2) U(j) U(k-j+2),  k >= 1

The two paths are algebraically identical; both are implemented and checked
against each other. First values: U(2) = -lambda/2, U(3) = -gamma*lambda/6.

gamma is fixed by the x = 1 boundary: the truncated residual
sum_{k=0}^{N} U(k) is driven to zero by a bracketing scan over gamma
followed by bisection (shooting). The closed-form reference solution is

    u(x) = -2 ln[ cosh((x - 1/2) theta/2) / cosh(theta/4) ]

where theta solves theta = sqrt(2 lambda) cosh(theta/4). That condition has
zero, one or two roots depending on lambda, which is what gives the problem
its lower/upper solution branches; u'(0) = theta * tanh(theta/4) links each
theta to its shooting slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BranchNotFoundError
from .powers import exp_step
from .series import Series, evaluate

__all__ = [
    "BratuProblem",
    "BratuSolution",
    "AnalyticBratu",
    "bratu_coeffs",
    "bratu_coeffs_exp",
    "boundary_residual",
    "shoot",
    "analytic_theta_roots",
    "analytic_u",
    "compare",
]

#: Shooting scan covers gamma in [0, GAMMA_MAX] with step GAMMA_STEP; the
#: upper-branch slope grows with theta, so the range is generous for the
#: supported lambda range [1e-3, 10].
GAMMA_MAX = 50.0
GAMMA_STEP = 0.25
RESIDUAL_TOL = 1e-12
MAX_BISECTIONS = 200

#: Root scan ceiling for the theta condition. Beyond 60, cosh(theta/4)
#: exceeds 1e6 and no further root exists for lambda >= 1e-3.
THETA_MAX = 60.0
THETA_STEP = 0.05

_BRANCHES = ("lower", "upper")


@dataclass(frozen=True)
class BratuProblem:
    """Problem parameters: positivity of lam and a usable order are enforced."""

    lam: float
    order: int

    def __post_init__(self):
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise ValueError("lambda must be positive and finite")
        if self.order < 3:
            raise ValueError("order must be at least 3")


@dataclass(frozen=True)
class BratuSolution:
    """A shot solution: slope gamma, coefficients, boundary residual, branch."""

    gamma: float
    coeffs: Series
    residual: float
    branch: str


def _require_order(order: int) -> None:
    if order < 3:
        raise ValueError("order must be at least 3")


def _require_branch(branch: str) -> None:
    if branch not in _BRANCHES:
        raise ValueError(f"branch must be 'lower' or 'upper', got {branch!r}")


def bratu_coeffs(lam: float, gamma: float, order: int) -> Series:
    """Coefficients by the simplified recurrence (exponential eliminated)."""
    _require_order(order)
    u = [0.0] * (order + 1)
    u[1] = float(gamma)
    u[2] = -(lam / 2.0) * math.exp(u[0])
    for k in range(1, order - 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc += (j * (k - j + 1) * (k - j + 2)) * (u[j] * u[k - j + 2])
        u[k + 2] = acc / (k * (k + 1) * (k + 2))
    return Series(u)


def bratu_coeffs_exp(lam: float, gamma: float, order: int) -> Series:
    """Coefficients by the exp path; internal consistency oracle for
    :func:`bratu_coeffs`.

    Steps the exponential recurrence for W alongside U, exactly as the
    lowered equation "D(u,2) = -lambda * exp(u)" executes it, so a DSL
    solve of the same equation reproduces these coefficients bitwise.
    """
    _require_order(order)
    u = [0.0] * (order + 1)
    u[1] = float(gamma)
    w = [0.0] * (order - 1)
    w[0] = math.exp(u[0])
    u[2] = (-lam * w[0]) / 2
    for k in range(1, order - 1):
        w[k] = exp_step(u, w, k)
        u[k + 2] = (-lam * w[k]) / ((k + 1) * (k + 2))
    return Series(u)


def boundary_residual(lam: float, gamma: float, order: int) -> float:
    """Truncated boundary value sum_{k=0}^{N} U(k), i.e. the series at x = 1."""
    return evaluate(bratu_coeffs(lam, gamma, order), 1.0)


def _bisect_residual(
    lam: float, order: int, lo: float, hi: float, f_lo: float
) -> tuple[float, float]:
    best_g = lo
    best_r = f_lo
    a, b, fa = lo, hi, f_lo
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (a + b)
        fm = boundary_residual(lam, mid, order)
        if abs(fm) < abs(best_r):
            best_g, best_r = mid, fm
        if abs(fm) <= RESIDUAL_TOL:
            return mid, fm
        if (fm < 0.0) == (fa < 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return best_g, best_r


def shoot(lam: float, order: int, branch: str) -> BratuSolution:
    """Find gamma so the truncated boundary residual vanishes.

    Scans gamma over [0, GAMMA_MAX] in GAMMA_STEP increments for sign
    changes of the residual, then bisects to |residual| <= RESIDUAL_TOL
    (or MAX_BISECTIONS halvings). The lower branch takes the
    smallest-gamma root, the upper branch the largest. Raises
    :class:`BranchNotFoundError` when no sign change exists, e.g. for
    lambda beyond the critical value.
    """
    _require_order(order)
    _require_branch(branch)
    steps = int(round(GAMMA_MAX / GAMMA_STEP))
    gammas = [i * GAMMA_STEP for i in range(steps + 1)]
    residuals = [boundary_residual(lam, g, order) for g in gammas]
    brackets: list[tuple[float, float, float]] = []
    for i in range(steps):
        if residuals[i] == 0.0:
            brackets.append((gammas[i], gammas[i], 0.0))
        elif residuals[i] * residuals[i + 1] < 0.0:
            brackets.append((gammas[i], gammas[i + 1], residuals[i]))
    if residuals[steps] == 0.0:
        brackets.append((gammas[steps], gammas[steps], 0.0))
    if not brackets:
        raise BranchNotFoundError(
            f"no sign change found: boundary residual never crosses zero for "
            f"gamma in [0, {GAMMA_MAX:g}] at lambda={lam:g}, order={order}"
        )
    lo, hi, f_lo = brackets[0] if branch == "lower" else brackets[-1]
    if lo == hi:
        gamma, residual = lo, 0.0
    else:
        gamma, residual = _bisect_residual(lam, order, lo, hi, f_lo)
    return BratuSolution(
        gamma=gamma,
        coeffs=bratu_coeffs(lam, gamma, order),
        residual=residual,
        branch=branch,
    )


def analytic_theta_roots(lam: float) -> list[float]:
    """All roots of theta = sqrt(2 lambda) cosh(theta/4) on (0, THETA_MAX].

    Sign-change scan in THETA_STEP increments, bisected to an interval
    width of 1e-14; returns 0, 1 or 2 roots in ascending order.
    """
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError("lambda must be positive and finite")
    s = math.sqrt(2.0 * lam)

    def g(t: float) -> float:
        return t - s * math.cosh(t / 4.0)

    roots: list[float] = []
    steps = int(round(THETA_MAX / THETA_STEP))
    prev_t = 0.0
    prev_g = g(0.0)
    for i in range(1, steps + 1):
        t = i * THETA_STEP
        gt = g(t)
        if gt == 0.0:
            roots.append(t)
        elif prev_g * gt < 0.0:
            a, b, ga = prev_t, t, prev_g
            while b - a > 1e-14:
                mid = 0.5 * (a + b)
                gm = g(mid)
                if gm == 0.0:
                    a = b = mid
                    break
                if (gm < 0.0) == (ga < 0.0):
                    a, ga = mid, gm
                else:
                    b = mid
            roots.append(0.5 * (a + b))
        prev_t, prev_g = t, gt
    return roots


def analytic_u(theta: float, x: float) -> float:
    """Closed-form solution value at x for the branch with parameter theta."""
    return -2.0 * math.log(
        math.cosh((x - 0.5) * (theta / 2.0)) / math.cosh(theta / 4.0)
    )


@dataclass(frozen=True)
class AnalyticBratu:
    """One analytic branch: theta paired with its lambda."""

    theta: float
    lam: float

    @classmethod
    def for_branch(cls, lam: float, branch: str) -> "AnalyticBratu":
        """The smaller theta root for the lower branch, the larger for the upper."""
        _require_branch(branch)
        roots = analytic_theta_roots(lam)
        if not roots:
            raise BranchNotFoundError(
                f"theta condition has no roots at lambda={lam:g}; "
                "no analytic branch exists"
            )
        return cls(theta=roots[0] if branch == "lower" else roots[-1], lam=lam)

    def u(self, x: float) -> float:
        return analytic_u(self.theta, x)


def compare(lam: float, order: int, grid_points: int, branch: str) -> float:
    """Max absolute gap between the shot series and the analytic branch.

    Evaluated on the uniform grid {i/(grid_points-1)}. The lower-branch
    series converges on [0, 1]; the upper-branch series may not, so the
    returned error is reported without any implied bound there.
    """
    if grid_points < 2:
        raise ValueError("grid must have at least 2 points")
    sol = shoot(lam, order, branch)
    ref = AnalyticBratu.for_branch(lam, branch)
    denom = grid_points - 1
    max_err = 0.0
    for i in range(grid_points):
        x = i / denom
        err = abs(evaluate(sol.coeffs, x) - ref.u(x))
        if err > max_err:
            max_err = err
    return max_err
