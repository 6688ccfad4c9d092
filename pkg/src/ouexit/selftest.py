"""Built-in cross-validation suite behind the ``selftest`` CLI command.

Re-derives the package's key invariants at runtime: the elementary bracket
on the incomplete gamma, the Brownian reduction of the exact formula, the
closed-form bound chain, the substitution identity tying the radial integral
to the incomplete gamma, and Monte-Carlo determinism.  Everything is checked
against independently computed quantities, so a corrupted build fails loudly
with the name of the first broken invariant.
"""

import math

import numpy as np

from . import special
from .mfet import ExitProblem, OupParams, mfet_bm, mfet_bounds, mfet_exact
from .quadrature import QuadConfig, integrate
from .simulate import McConfig, Scheme, estimate_mfet


def _log_grid(lo, hi, n):
    return np.exp(np.linspace(math.log(lo), math.log(hi), n))


def check_neuman_bracket(fast=False, ln_lig=None):
    """lower <= lig(a, x) <= upper on the sampling grid, compared in log space."""
    ln_lig = ln_lig or special.ln_lower_gamma
    a_values = (0.5, 2.5, 50.0) if fast else (0.5, 1.0, 2.5, 5.0, 10.0, 50.0, 500.0)
    n_x = 15 if fast else 40
    for a in a_values:
        for x in _log_grid(1e-6, 1e4, n_x):
            lo, hi = special.neuman_log_bounds(a, float(x))
            lg = ln_lig(a, float(x))
            slack = 4e-15 * (1.0 + abs(lg))
            if not (lo <= lg + slack and lg <= hi + slack):
                return False, f"violated at a={a}, x={x:.6g}: {lo} <= {lg} <= {hi}"
    return True, "bracket holds on the full grid"


def check_brownian_reduction(fast=False):
    """mfet at lam = +/-1e-12 matches (L^2-x^2)/(sigma^2 d) to 1e-6 relative."""
    dims = (1, 64) if fast else (1, 4, 64, 1024)
    configs = ((4.0, 0.0, 1.0),) if fast else ((4.0, 0.0, 1.0), (2.0, 1.0, 1.0), (3.0, 0.0, 2.0))
    lams = (1e-12,) if fast else (1e-12, -1e-12)
    for d in dims:
        for big_l, x, sigma in configs:
            for lam in lams:
                prob = ExitProblem(OupParams(theta=lam * sigma * sigma, sigma=sigma, d=d), L=big_l, x=x)
                got = mfet_exact(prob)
                want = mfet_bm(prob)
                if abs(got - want) / want > 1e-6:
                    return False, f"d={d}, lam={lam}, (L,x,sigma)=({big_l},{x},{sigma}): {got} vs {want}"
    return True, "exact formula reduces to the Brownian value"


def check_bound_chain(fast=False):
    """lower_bm <= lower_exp <= mfet_exact <= upper_mixed <= upper_exp."""
    dims = (2, 64) if fast else (1, 4, 64, 1024)
    lams = (0.5,) if fast else (0.5, 2.0)
    geoms = ((4.0, 0.0),) if fast else ((4.0, 0.0), (2.0, 1.0))
    for d in dims:
        for lam in lams:
            for big_l, x in geoms:
                prob = ExitProblem(OupParams(theta=lam, sigma=1.0, d=d), L=big_l, x=x)
                b = mfet_bounds(prob)
                mid = mfet_exact(prob)
                slack = 1e-8 * mid
                chain = (
                    b.lower_bm <= b.lower_exp + 1e-13 * b.lower_exp
                    and b.lower_exp <= mid + slack
                    and mid <= b.upper_mixed + slack
                    and b.upper_mixed <= b.upper_exp * (1 + 1e-13)
                )
                if not chain:
                    return False, f"chain broken at d={d}, lam={lam}, (L,x)=({big_l},{x})"
    return True, "bound chain holds"


def check_substitution_identity(fast=False, ln_lig=None):
    """Radial integral equals lam**(-d/2)/2 * lig(d/2, lam z^2) to 1e-10 relative."""
    ln_lig = ln_lig or special.ln_lower_gamma
    cases = [(2, 0.5, 1.0)] if fast else [
        (d, lam, z) for d in (2, 5) for lam in (0.5, 2.0) for z in (0.5, 1.0, 3.0)
    ]
    for d, lam, z in cases:
        direct = integrate(lambda t: t ** (d - 1) * math.exp(-lam * t * t), 0.0, z,
                           QuadConfig(rel_tol=1e-12)).value
        via_gamma = 0.5 * lam ** (-0.5 * d) * math.exp(ln_lig(0.5 * d, lam * z * z))
        if abs(direct - via_gamma) / via_gamma > 1e-10:
            return False, f"d={d}, lam={lam}, z={z}: {direct} vs {via_gamma}"
    return True, "substitution identity holds"


def check_mc_determinism(fast=False):
    """Two identical estimate runs produce bitwise-identical results."""
    prob = ExitProblem(OupParams(theta=0.0, sigma=1.0, d=8), L=2.0, x=0.0)
    cfg = McConfig(n_paths=32 if fast else 128, dt=1e-3, seed=20240817,
                   scheme=Scheme.SQUARED_RADIAL_EULER)
    first = estimate_mfet(prob, cfg)
    second = estimate_mfet(prob, cfg)
    if first != second:
        return False, f"{first} != {second}"
    return True, "estimates are bitwise reproducible"


CHECKS = (
    ("neuman-bracket", check_neuman_bracket, True),
    ("brownian-reduction", check_brownian_reduction, False),
    ("bound-chain", check_bound_chain, False),
    ("substitution-identity", check_substitution_identity, True),
    ("mc-determinism", check_mc_determinism, False),
)


def run_selftest(fast=False, ln_lig=None, out=print):
    """Run every check; return (all_passed, first_failure_name)."""
    first_failure = None
    out(f"{'check':<24} {'status':<6} detail")
    for name, fn, takes_gamma in CHECKS:
        ok, detail = fn(fast=fast, ln_lig=ln_lig) if takes_gamma else fn(fast=fast)
        out(f"{name:<24} {'pass' if ok else 'FAIL':<6} {detail}")
        if not ok and first_failure is None:
            first_failure = name
    return first_failure is None, first_failure
