"""Mean first-exit time of a d-dimensional Ornstein-Uhlenbeck process from a ball.

The process dX = -theta*X dt + sigma*dB started on the sphere of radius x
exits the centered ball of radius L at a mean time that admits the exact
representation

    E tau = (2/sigma^2) * int_x^L z^(1-d) exp(lam z^2)
                          * [int_0^z t^(d-1) exp(-lam t^2) dt] dz,

with lam = theta/sigma^2, valid for every real lam.  For lam > 0 the inner
integral collapses to a lower incomplete gamma and the whole thing becomes a
single integral,

    E tau = (1/(lam^(d/2) sigma^2)) * int_x^L z^(1-d) exp(lam z^2)
                                      * lig(d/2, lam z^2) dz,

which this module evaluates end-to-end in log space: the linear integrand
overflows doubles for d beyond a few hundred.  For lam <= 0 (Brownian and
transient regimes) the nested double integral is evaluated directly, again
in log space.

Also here: the Brownian-motion closed form (L^2-x^2)/(sigma^2 d), the
two-sided closed-form bounds obtained by pushing the Neuman inequalities
through the single-integral form (valid for theta > 0), the ratio to the
Brownian value (which tends to 1 as d grows, for any theta >= 0), the drift
ratio of the squared radial process against its Brownian counterpart, and a
finite-difference residual of the exit-time ODE

    u'' = [2 lam x - (d-1)/x] u' - 2/sigma^2,   u(L) = 0,

used as an independent correctness probe on the computed solution.
"""

import math
from dataclasses import dataclass

from . import special
from .errors import DomainError, QuadratureError
from .quadrature import QuadConfig, integrate_log

_MAX_EXP = 709.782712893384


@dataclass(frozen=True)
class OupParams:
    """Process parameters: drift weight theta, diffusion weight sigma, dimension d."""

    theta: float
    sigma: float
    d: int

    def __post_init__(self):
        if not (isinstance(self.d, int) and self.d >= 1):
            raise DomainError(f"dimension must be an integer >= 1, got {self.d!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be a positive finite real, got {self.sigma!r}")
        if not math.isfinite(self.theta):
            raise DomainError(f"theta must be finite, got {self.theta!r}")

    @property
    def lam(self):
        """Mean-reversion per unit squared length: theta / sigma**2 (recomputed, never stored)."""
        return self.theta / (self.sigma * self.sigma)


@dataclass(frozen=True)
class ExitProblem:
    """An OUP together with the ball radius L and the start radius x."""

    params: OupParams
    L: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0):
            raise DomainError(f"ball radius must be a positive finite real, got {self.L!r}")
        if not (math.isfinite(self.x) and 0 <= self.x <= self.L):
            raise DomainError(f"start radius must lie in [0, L], got {self.x!r}")


@dataclass(frozen=True)
class MfetBounds:
    """The four closed-form bounds, ordered lower_bm <= lower_exp <= E tau <= upper_mixed <= upper_exp."""

    upper_mixed: float
    upper_exp: float
    lower_exp: float
    lower_bm: float


def _exp_diff(lo, hi):
    """exp(hi) - exp(lo) for hi >= lo, cancellation-safe; inf on overflow."""
    if hi > _MAX_EXP:
        return math.inf
    return math.exp(lo) * math.expm1(hi - lo)


def _exp_or_inf(v):
    return math.exp(v) if v <= _MAX_EXP else math.inf


def _log_integrand_reverting(params):
    """Log-integrand of the single-integral form, constants folded in.

    log f(z) = (1-d) ln z + lam z^2 + ln lig(d/2, lam z^2)
               - (d/2) ln lam - 2 ln sigma

    so that the integral of exp(log f) over [x, L] is the mean exit time
    itself (keeping the constant inside keeps the linear value of the
    quadrature at the scale the tolerances refer to).
    """
    lam = params.lam
    d = params.d
    a = 0.5 * d
    log_c = -a * math.log(lam) - 2.0 * math.log(params.sigma)

    def log_f(z):
        u = lam * z * z
        return (1.0 - d) * math.log(z) + u + special.ln_lower_gamma(a, u) + log_c

    return log_f


def _log_integrand_nested(params, cfg):
    """Log-integrand of the outer integral for lam <= 0 (nested form).

    The inner integral of t^(d-1) exp(-lam t^2) is itself evaluated in log
    space: its integrand overflows doubles for d beyond a few hundred even
    at lam = 0.
    """
    lam = params.lam
    d = params.d
    dm1 = d - 1.0
    log_c = math.log(2.0) - 2.0 * math.log(params.sigma)
    inner_cfg = QuadConfig(
        rel_tol=min(cfg.rel_tol * 0.1, 1e-11),
        abs_tol=0.0,
        max_panels=cfg.max_panels,
    )

    def log_g(t):
        return dm1 * math.log(t) - lam * t * t

    def log_f(z):
        inner = integrate_log(log_g, 0.0, z, inner_cfg)
        if not inner.converged:
            raise QuadratureError("inner radial integral did not converge", inner)
        return (1.0 - d) * math.log(z) + lam * z * z + inner.value + log_c

    return log_f


def _outer_log_integrand(problem, cfg):
    if problem.params.lam > 0:
        return _log_integrand_reverting(problem.params)
    return _log_integrand_nested(problem.params, cfg)


def mfet_exact(problem, cfg=QuadConfig()):
    """Exact mean first-exit time, by adaptive quadrature of the closed form.

    Uses the single-integral incomplete-gamma form for lam > 0 and the
    nested double integral for lam <= 0.  Returns exactly 0 when the start
    radius sits on the boundary.  Raises QuadratureError (carrying the
    partial result) if the panel budget is exhausted.
    """
    if problem.x == problem.L:
        return 0.0
    log_f = _outer_log_integrand(problem, cfg)
    res = integrate_log(log_f, problem.x, problem.L, cfg)
    if not res.converged:
        raise QuadratureError("exit-time quadrature did not converge", res)
    return _exp_or_inf(res.value)


def mfet_bm(problem):
    """Brownian-motion mean exit time (L^2 - x^2) / (sigma^2 d); theta is ignored."""
    p = problem.params
    return (problem.L * problem.L - problem.x * problem.x) / (p.sigma * p.sigma * p.d)


def mfet_bounds(problem):
    """Closed-form two-sided bounds on the mean exit time, for theta > 0.

    upper_mixed = 2/(sigma^2 d (d+2)) * ( (exp(lam L^2) - exp(lam x^2))/lam
                                          + (d/2)(L^2 - x^2) )
    upper_exp   = (exp(lam L^2) - exp(lam x^2)) / (theta d)
    lower_exp   = (1 + 2/d)/(2 lam sigma^2)
                  * (exp(2 lam L^2/(d+2)) - exp(2 lam x^2/(d+2)))
    lower_bm    = (L^2 - x^2) / (sigma^2 d)

    Exponentials beyond double range come back as inf rather than raising.
    """
    p = problem.params
    lam = p.lam
    if lam <= 0:
        raise DomainError("bounds require theta > 0 (positively recurrent regime)")
    d = p.d
    s2 = p.sigma * p.sigma
    l2 = problem.L * problem.L
    x2 = problem.x * problem.x

    diff_full = _exp_diff(lam * x2, lam * l2)
    g = 2.0 * lam / (d + 2.0)
    diff_inner = _exp_diff(g * x2, g * l2)

    upper_mixed = (2.0 / (s2 * d * (d + 2.0))) * (diff_full / lam + 0.5 * d * (l2 - x2))
    upper_exp = diff_full / (p.theta * d)
    lower_exp = (1.0 + 2.0 / d) / (2.0 * lam * s2) * diff_inner
    lower_bm = (l2 - x2) / (s2 * d)
    return MfetBounds(
        upper_mixed=upper_mixed,
        upper_exp=upper_exp,
        lower_exp=lower_exp,
        lower_bm=lower_bm,
    )


def asymptotic_ratio(problem, cfg=QuadConfig()):
    """Mean exit time relative to the Brownian closed form; tends to 1 as d grows."""
    if problem.x == problem.L:
        raise DomainError("ratio is 0/0 when starting on the boundary")
    return mfet_exact(problem, cfg) / mfet_bm(problem)


def drift_ratio(params, rho):
    """Drift of the squared radial OUP over the squared-Bessel drift at radius rho.

    (sigma^2 d - 2 theta rho^2) / (sigma^2 d); identically 1 for theta = 0,
    and increases toward 1 as d grows for fixed rho.
    """
    if not (isinstance(rho, (int, float)) and math.isfinite(rho) and rho >= 0):
        raise DomainError(f"rho must be a nonnegative finite real, got {rho!r}")
    s2d = params.sigma * params.sigma * params.d
    return (s2d - 2.0 * params.theta * rho * rho) / s2d


def avp_residual(problem, x_eval, h=None, cfg=QuadConfig()):
    """Finite-difference residual of the exit-time ODE at an interior radius.

    With u the mean exit time as a function of the start radius, returns

        u''(x) - [2 lam x - (d-1)/x] u'(x) + 2/sigma^2

    at x = x_eval, with u', u'' by central differences of step h (default
    1e-3 * L).  Near 0 for the true solution; the leftover is the O(h^2)
    stencil truncation plus quadrature noise.

    The derivatives are assembled from the two short integrals of the outer
    integrand over [x-h, x] and [x, x+h], which is algebraically the same
    central-difference stencil on u but avoids the catastrophic cancellation
    of differencing three nearly equal quadrature results.
    """
    if h is None:
        h = 1e-3 * problem.L
    if not (h > 0 and x_eval - h > 0 and x_eval + h < problem.L):
        raise DomainError(
            f"need 0 < x_eval-h and x_eval+h < L, got x_eval={x_eval!r}, h={h!r}"
        )
    p = problem.params
    log_f = _outer_log_integrand(problem, cfg)

    left = integrate_log(log_f, x_eval - h, x_eval, cfg)
    right = integrate_log(log_f, x_eval, x_eval + h, cfg)
    for part in (left, right):
        if not part.converged:
            raise QuadratureError("residual quadrature did not converge", part)
    a = math.exp(left.value)   # u(x-h) - u(x)
    b = math.exp(right.value)  # u(x) - u(x+h)

    d2u = (a - b) / (h * h)
    d1u = -(a + b) / (2.0 * h)
    coeff = 2.0 * p.lam * x_eval - (p.d - 1.0) / x_eval
    return d2u - coeff * d1u + 2.0 / (p.sigma * p.sigma)
