"""Monte-Carlo exit times for the d-dimensional OUP and its radial reductions.

Four per-step schemes, all monitored on the time grid (an exit is recorded
at the first grid time whose radius reaches L; nothing is interpolated, so
detected exits are biased late and the bias shrinks with dt):

* full-euler           Euler-Maruyama on the d-dimensional SDE
                       dX = -theta X dt + sigma dB.
* full-exact           exact OU transition per step: per component,
                       mean decay exp(-theta dt) and variance
                       sigma^2 (1 - exp(-2 theta dt)) / (2 theta);
                       theta = 0 degenerates to Brownian increments.
* radial-euler         Euler on the radial SDE
                       d rho = [(d-1) sigma^2 / (2 rho) - theta rho] dt + sigma dB;
                       the drift is singular at 0, so a start at x = 0 takes
                       one bootstrap step with the squared-radial update and
                       then switches.  A nonpositive Euler excursion is
                       reflected.
* squared-radial-euler full-truncation Euler on the squared-radial SDE
                       dy = (sigma^2 d - 2 theta y) dt + 2 sigma sqrt(y) dB,
                       i.e. y <- y + (sigma^2 d - 2 theta max(y,0)) dt
                                 + 2 sigma sqrt(max(y,0)) dW,
                       exit when y >= L^2.  Per-step cost independent of d.

Determinism contract: the stream of Gaussians for path i is a pure function
of (seed, i, draw position).  Streams are Philox counter-based generators
keyed by (seed, path index); Gaussians come from the inverse normal CDF of
fixed-position uniforms (a rejection sampler would consume a data-dependent
number of draws and break reproducibility under regrouping).  Every
aggregate is reduced in path-index order with pairwise summation, so
estimates are identical however the paths are batched or parallelized.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import ndtri

from .errors import DomainError, EstimationError

_U64_MAX = 2**64 - 1
_BLOCK_FLOATS = 2_000_000


class Scheme(str, Enum):
    FULL_EULER = "full-euler"
    FULL_EXACT = "full-exact"
    RADIAL_EULER = "radial-euler"
    SQUARED_RADIAL_EULER = "squared-radial-euler"


@dataclass(frozen=True)
class McConfig:
    """Path count, step size, stream seed, scheme, and safety horizon."""

    n_paths: int
    dt: float
    seed: int = 0
    scheme: Scheme = Scheme.SQUARED_RADIAL_EULER
    t_max: Optional[float] = None  # default resolves to 1e6 * dt

    def __post_init__(self):
        if not (isinstance(self.n_paths, int) and self.n_paths >= 1):
            raise DomainError(f"n_paths must be an integer >= 1, got {self.n_paths!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise DomainError(f"dt must be a positive finite real, got {self.dt!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed <= _U64_MAX):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        try:
            object.__setattr__(self, "scheme", Scheme(self.scheme))
        except ValueError:
            raise DomainError(f"unknown scheme {self.scheme!r}") from None
        if self.t_max is None:
            object.__setattr__(self, "t_max", 1e6 * self.dt)
        if not (math.isfinite(self.t_max) and self.t_max >= self.dt):
            raise DomainError(f"t_max must be finite and >= dt, got {self.t_max!r}")


@dataclass(frozen=True)
class McEstimate:
    """Mean exit time over the exited paths, with its sampling uncertainty."""

    mean: float
    std_err: float
    ci95_low: float
    ci95_high: float
    n_exited: int
    n_censored: int
    dt: float
    scheme: Scheme


@dataclass(frozen=True)
class PathRecord:
    """Downsampled (time, radius) trace of one path."""

    times: np.ndarray
    radii: np.ndarray
    exited_at: Optional[float]


class _PathStream:
    """Counter-based raw stream for one path, keyed by (seed, path index)."""

    __slots__ = ("_bg",)

    def __init__(self, seed, index):
        self._bg = np.random.Philox(key=np.array([seed, index], dtype=np.uint64))

    def raw(self, n):
        return self._bg.random_raw(n)


def _normals_from_raw(raw):
    # 53-bit uniform centered in (0, 1), then inverse normal CDF; both steps
    # are fixed elementwise maps, so values depend only on the raw draws.
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u)


def _draws_per_step(scheme, d):
    return d if scheme in (Scheme.FULL_EULER, Scheme.FULL_EXACT) else 1


def _run_paths(problem, cfg, indices, record=None, stride=1):
    """Advance the given paths to exit or the horizon; return grid exit times.

    Returns an array aligned with ``indices`` holding the exit grid time, or
    NaN for paths censored at the horizon.  When ``record`` is a list it
    collects (t, radius) samples every ``stride`` steps plus the crossing
    sample (single-path runs only).
    """
    p = problem.params
    scheme = cfg.scheme
    n = len(indices)
    d = p.d
    m = _draws_per_step(scheme, d)
    dt = cfg.dt
    sqrt_dt = math.sqrt(dt)
    big_l2 = problem.L * problem.L
    max_steps = max(1, int(math.floor(cfg.t_max / dt + 1e-9)))

    out = np.full(n, math.nan)
    if record is not None:
        if n != 1:
            raise DomainError("recording is a single-path operation")
        record.append((0.0, problem.x))
    if problem.x >= problem.L:
        # starts on the boundary; the single start sample is the whole record
        out[:] = 0.0
        return out

    # scheme constants
    s2d = p.sigma * p.sigma * d
    two_theta = 2.0 * p.theta
    two_sig_sqdt = 2.0 * p.sigma * sqrt_dt
    sig_sqdt = p.sigma * sqrt_dt
    theta_dt = p.theta * dt
    half_dm1_s2 = 0.5 * (d - 1) * p.sigma * p.sigma
    if scheme is Scheme.FULL_EXACT:
        decay = math.exp(-p.theta * dt)
        if p.theta == 0.0:
            step_sd = sig_sqdt
        else:
            step_sd = p.sigma * math.sqrt(-math.expm1(-2.0 * p.theta * dt) / (2.0 * p.theta))

    # per-path state
    if scheme in (Scheme.FULL_EULER, Scheme.FULL_EXACT):
        state = np.zeros((n, d))
        state[:, 0] = problem.x
    elif scheme is Scheme.SQUARED_RADIAL_EULER:
        state = np.full(n, problem.x * problem.x)
    else:
        state = np.full(n, problem.x)
    radial_bootstrap = scheme is Scheme.RADIAL_EULER and problem.x == 0.0

    streams = [_PathStream(cfg.seed, i) for i in indices]
    pos_map = np.arange(n)  # row -> position in ``out``
    chunk = max(1, min(2048, _BLOCK_FLOATS // max(1, n * m)))
    block = None
    pos = chunk

    for step in range(max_steps):
        if pos == chunk:
            raws = np.stack([s.raw(chunk * m) for s in streams])
            block = _normals_from_raw(raws)
            if m > 1:
                block = block.reshape(len(streams), chunk, m)
            pos = 0
        z = block[:, pos] if m == 1 else block[:, pos, :]
        pos += 1

        if scheme is Scheme.FULL_EULER:
            state = state - theta_dt * state + sig_sqdt * z
            monitored = np.sum(state * state, axis=1)
            threshold = big_l2
        elif scheme is Scheme.FULL_EXACT:
            state = decay * state + step_sd * z
            monitored = np.sum(state * state, axis=1)
            threshold = big_l2
        elif scheme is Scheme.SQUARED_RADIAL_EULER:
            yp = np.maximum(state, 0.0)
            state = state + (s2d - two_theta * yp) * dt + two_sig_sqdt * np.sqrt(yp) * z
            monitored = state
            threshold = big_l2
        else:  # RADIAL_EULER
            if radial_bootstrap and step == 0:
                y = state * state
                yp = np.maximum(y, 0.0)
                y = y + (s2d - two_theta * yp) * dt + two_sig_sqdt * np.sqrt(yp) * z
                state = np.sqrt(np.maximum(y, 0.0))
            else:
                state = state + (half_dm1_s2 / state - p.theta * state) * dt + sig_sqdt * z
                state = np.abs(state)
            monitored = state
            threshold = problem.L

        t_now = (step + 1) * dt
        exited = monitored >= threshold
        if record is not None:
            if scheme in (Scheme.FULL_EULER, Scheme.FULL_EXACT):
                radius = math.sqrt(float(monitored[0]))
            elif scheme is Scheme.SQUARED_RADIAL_EULER:
                radius = math.sqrt(max(float(monitored[0]), 0.0))
            else:
                radius = float(monitored[0])
            if bool(exited[0]) or (step + 1) % stride == 0:
                record.append((t_now, radius))
        if exited.any():
            out[pos_map[exited]] = t_now
            keep = ~exited
            if not keep.any():
                return out
            pos_map = pos_map[keep]
            state = state[keep]
            block = block[keep]
            streams = [s for s, k in zip(streams, keep) if k]
    return out


def sample_exit_time(problem, cfg, path_index):
    """Exit grid time of one path, or None if it was censored at the horizon."""
    if not (isinstance(path_index, int) and 0 <= path_index < cfg.n_paths):
        raise DomainError(f"path_index must lie in [0, n_paths), got {path_index!r}")
    t = _run_paths(problem, cfg, [path_index])[0]
    return None if math.isnan(t) else float(t)


def estimate_mfet(problem, cfg):
    """Mean exit time over n_paths independent paths.

    Censored paths (those that reach t_max without exiting) are excluded
    from the mean but reported in ``n_censored``; if every path is censored
    the horizon was too short and an EstimationError is raised.
    """
    times = _run_paths(problem, cfg, list(range(cfg.n_paths)))
    exited = ~np.isnan(times)
    n_exited = int(np.count_nonzero(exited))
    n_censored = cfg.n_paths - n_exited
    if n_exited == 0:
        raise EstimationError(
            f"horizon too short: all {n_censored} paths censored at t_max={cfg.t_max!r}",
            n_censored,
        )
    sample = times[exited]
    mean = float(np.sum(sample) / n_exited)
    if n_exited > 1:
        var = float(np.sum((sample - mean) ** 2) / (n_exited - 1))
        std_err = math.sqrt(var / n_exited)
    else:
        std_err = 0.0
    half = 1.959963984540054 * std_err
    return McEstimate(
        mean=mean,
        std_err=std_err,
        ci95_low=mean - half,
        ci95_high=mean + half,
        n_exited=n_exited,
        n_censored=n_censored,
        dt=cfg.dt,
        scheme=cfg.scheme,
    )


def record_path(problem, cfg, path_index, stride=1):
    """Like sample_exit_time, but keeps every stride-th (t, radius) sample."""
    if not (isinstance(stride, int) and stride >= 1):
        raise DomainError(f"stride must be an integer >= 1, got {stride!r}")
    if not (isinstance(path_index, int) and 0 <= path_index < cfg.n_paths):
        raise DomainError(f"path_index must lie in [0, n_paths), got {path_index!r}")
    samples = []
    t = _run_paths(problem, cfg, [path_index], record=samples, stride=stride)[0]
    times = np.array([s[0] for s in samples])
    radii = np.array([s[1] for s in samples])
    return PathRecord(times=times, radii=radii, exited_at=None if math.isnan(t) else float(t))
