"""Fourth-order integration of the (optionally smoothed) relay equation.

Because the right-hand side a(t)*f(x(t-1)) does not involve the current
state, the classical one-step scheme reduces to Simpson quadrature of the
rhs over each step, which keeps fourth order with three rhs evaluations
per step. Delayed values come from cubic Hermite interpolation of stored
(value, derivative) samples.

Order is preserved by never letting a step straddle a kink of the rhs:

  * static knots at the coefficient ramp edges (multiples of T and T+p1,
    shifted by +-delta when delta > 0) and at the integer lattice, where
    the history junction echoes;
  * dynamic knots one delay after the solution crosses a level where the
    nonlinearity bends (-delta, 0, +delta), found by root-solving the
    Hermite interpolant of the step that produced the crossing.

With delta == 0 the rhs is piecewise constant between knots, Simpson
integrates it exactly, and the scheme reproduces the event-driven
construction to rounding; knots are then stored twice, carrying the
one-sided derivatives of the kinked solution.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass

import numpy as np

from .exact import ConstantHistory, propagate, zeros as path_zeros
from .maps import NotApplicable, classify
from .model import (
    Params,
    RelayDDEError,
    SmoothingSpec,
    coefficient_value,
    nonlinearity_value,
    validate_geometry,
)

BREAK_TOL = 1e-9
SIDE_NUDGE = 1e-10


class StepTooLarge(RelayDDEError):
    """The requested step cannot resolve the smoothing windows."""


class NonFiniteState(RelayDDEError):
    """The integrated state left the double range."""


class ShapeLost(RelayDDEError):
    """A perturbed orbit no longer has the two-zero period layout."""


@dataclass(frozen=True)
class DenseSolution:
    """Dense output of one integration run.

    The sample grid covers [start_time - 1, end] so delayed lookups never
    leave the stored history. Times are non-decreasing; a repeated time
    carries the two one-sided derivatives at a kink of the solution
    (always present at the history junction, and at every rhs jump when
    delta == 0).
    """

    start_time: float
    step: float
    times: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    events: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.times)
        if n < 2 or len(self.values) != n or len(self.derivs) != n:
            raise ValueError("times, values and derivs must share a length >= 2")
        if np.any(np.diff(self.times) < 0.0):
            raise ValueError("times must be non-decreasing")

    @property
    def end_time(self) -> float:
        return float(self.times[-1])

    def values_at(self, ts) -> np.ndarray:
        """Cubic Hermite evaluation at the given times (vectorized)."""
        tq = np.asarray(ts, dtype=float)
        scalar = tq.ndim == 0
        tq = np.atleast_1d(tq)
        lo, hi = float(self.times[0]), float(self.times[-1])
        if np.any(tq < lo - 1e-9) or np.any(tq > hi + 1e-9):
            raise ValueError("query time outside the stored range")
        tq = np.clip(tq, lo, hi)
        i = np.searchsorted(self.times, tq, side="right") - 1
        i = np.clip(i, 0, len(self.times) - 2)
        # a query landing exactly on the first copy of a repeated knot
        # would select the zero-width interval; step past it
        degenerate = self.times[i + 1] == self.times[i]
        i = np.where(degenerate & (i + 2 <= len(self.times) - 1), i + 1, i)
        i = np.where(self.times[i + 1] == self.times[i], i - 1, i)
        dt = self.times[i + 1] - self.times[i]
        u = (tq - self.times[i]) / dt
        u2 = u * u
        u3 = u2 * u
        out = ((2.0 * u3 - 3.0 * u2 + 1.0) * self.values[i]
               + (u3 - 2.0 * u2 + u) * dt * self.derivs[i]
               + (-2.0 * u3 + 3.0 * u2) * self.values[i + 1]
               + (u3 - u2) * dt * self.derivs[i + 1])
        return float(out[0]) if scalar else out

    def value_at(self, t: float) -> float:
        return float(self.values_at(t))

    def to_csv(self, thin: int = 1) -> str:
        """CSV rows t,x,dx keeping every thin-th sample plus the last."""
        if thin < 1:
            raise ValueError("thin must be a positive integer")
        idx = list(range(0, len(self.times), thin))
        if idx[-1] != len(self.times) - 1:
            idx.append(len(self.times) - 1)
        lines = ["t,x,dx"]
        for i in idx:
            lines.append(f"{float(self.times[i])!r},{float(self.values[i])!r},"
                         f"{float(self.derivs[i])!r}")
        return "\n".join(lines) + "\n"


def default_step(smoothing: SmoothingSpec) -> float:
    """Default integration step: resolve each ramp with >= 16 nodes."""
    if smoothing.delta > 0.0:
        return min(smoothing.delta / 16.0, 1.0 / 64.0)
    return 1e-3


def _hermite(u: float, dt: float, x0: float, d0: float, x1: float, d1: float) -> float:
    u2 = u * u
    u3 = u2 * u
    return ((2.0 * u3 - 3.0 * u2 + 1.0) * x0 + (u3 - 2.0 * u2 + u) * dt * d0
            + (-2.0 * u3 + 3.0 * u2) * x1 + (u3 - u2) * dt * d1)


def _crossing_time(t0: float, t1: float, x0: float, d0: float, x1: float,
                   d1: float, level: float) -> float | None:
    """Root of the step's Hermite interpolant minus level, if it changes sign."""
    f0 = x0 - level
    f1 = x1 - level
    if f1 == 0.0:
        return t1
    if f0 == 0.0 or (f0 > 0.0) == (f1 > 0.0):
        return None
    dt = t1 - t0
    lo, hi = 0.0, 1.0
    flo = f0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fm = _hermite(mid, dt, x0, d0, x1, d1) - level
        if fm == 0.0:
            return t0 + mid * dt
        if (fm > 0.0) == (flo > 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
        if (hi - lo) * dt < 1e-15:
            break
    return t0 + 0.5 * (lo + hi) * dt


def integrate(params: Params, smoothing: SmoothingSpec, h: float,
              t_end: float, step: float | None = None) -> DenseSolution:
    """Integrate x'(t) = a(t) f(x(t-1)) from the constant history h on [-1, 0].

    h may be any finite real, including 0 (the invariant zero solution).
    The step must not exceed delta/16 when delta > 0, nor 1e-3 when
    delta == 0; omitted, it defaults to ``default_step``.
    """
    if not math.isfinite(h):
        raise ValueError("history value h must be finite")
    if not math.isfinite(t_end) or t_end <= 0.0:
        raise ValueError("t_end must be positive and finite")
    validate_geometry(params, smoothing)
    delta = smoothing.delta
    if step is None:
        step = default_step(smoothing)
    if not math.isfinite(step) or step <= 0.0:
        raise ValueError("step must be positive and finite")
    if delta > 0.0 and step > delta / 16.0 * (1.0 + 1e-12):
        raise StepTooLarge(f"step {step} exceeds delta/16 = {delta / 16.0}")
    if delta == 0.0 and step > 1e-3 * (1.0 + 1e-12):
        raise StepTooLarge(f"step {step} exceeds the sharp-model cap 1e-3")

    T = params.period
    sharp = delta == 0.0

    # static knots: ramp edges (switch times when sharp) and the integer lattice
    statics: list[float] = []
    k = 0
    while k * T < t_end + T:
        for base in (k * T, k * T + params.p1):
            offsets = (0.0,) if sharp else (-delta, delta)
            for off in offsets:
                s = base + off
                if BREAK_TOL < s < t_end - BREAK_TOL:
                    statics.append(s)
        k += 1
    j = 1
    while j < t_end - BREAK_TOL:
        statics.append(float(j))
        j += 1
    statics.sort()
    breaks: list[float] = []
    for s in statics:
        if not breaks or s - breaks[-1] > BREAK_TOL:
            breaks.append(s)
    breaks.append(t_end)

    all_knots = sorted(breaks)  # for dedupe of dynamic echoes
    pending: list[float] = []   # dynamic echo knots (heap)

    levels = (0.0,) if sharp else (-delta, 0.0, delta)

    times = [-1.0, 0.0, 0.0]
    values = [h, h, h]
    derivs = [0.0, 0.0, 0.0]

    ptr = 0  # rolling index for delayed lookups; query times never decrease

    def delayed(s: float) -> float:
        nonlocal ptr
        n = len(times)
        while ptr + 2 < n and times[ptr + 1] <= s:
            ptr += 1
        t0, t1 = times[ptr], times[ptr + 1]
        if t1 == t0:  # pragma: no cover - repeated knot, step past it
            ptr += 1
            t0, t1 = times[ptr], times[ptr + 1]
        u = (s - t0) / (t1 - t0)
        return _hermite(u, t1 - t0, values[ptr], derivs[ptr],
                        values[ptr + 1], derivs[ptr + 1])

    def rhs(s: float) -> float:
        return (coefficient_value(params, s, smoothing)
                * nonlinearity_value(smoothing, delayed(s - 1.0)))

    def push_echo(tau: float) -> None:
        knot = tau + 1.0
        if knot >= t_end - BREAK_TOL:
            return
        i = bisect.bisect_left(all_knots, knot)
        for nb in (i - 1, i):
            if 0 <= nb < len(all_knots) and abs(all_knots[nb] - knot) <= BREAK_TOL:
                return
        all_knots.insert(i, knot)
        heapq.heappush(pending, knot)

    derivs[-1] = rhs(SIDE_NUDGE if sharp else 0.0)
    t = 0.0
    x = h
    g_left = derivs[-1]
    bi = 0
    while t < t_end - BREAK_TOL:
        nb = breaks[bi]
        while pending and pending[0] <= t + BREAK_TOL:
            heapq.heappop(pending)
        if pending and pending[0] < nb - BREAK_TOL:
            nb = pending[0]
        else:
            bi += 1
        span = nb - t
        nsub = max(1, math.ceil(span / step - 1e-12))
        sub = span / nsub
        for jj in range(nsub):
            t0 = t + jj * sub
            t1 = nb if jj == nsub - 1 else t + (jj + 1) * sub
            last = jj == nsub - 1
            g_mid = rhs(t0 + 0.5 * sub)
            if sharp and last:
                g_right = rhs(t1 - SIDE_NUDGE)
            else:
                g_right = rhs(t1)
            x_new = x + sub * (g_left + 4.0 * g_mid + g_right) / 6.0
            if not math.isfinite(x_new):  # pragma: no cover - defensive
                raise NonFiniteState(f"state became non-finite near t = {t1}")
            for lev in levels:
                tau = _crossing_time(t0, t1, x, g_left, x_new, g_right, lev)
                if tau is not None:
                    push_echo(tau)
            times.append(t1)
            values.append(x_new)
            derivs.append(g_right)
            x = x_new
            g_left = g_right
        if sharp and nb < t_end - BREAK_TOL:
            # store the right-sided derivative on a second copy of the knot
            g_left = rhs(nb + SIDE_NUDGE)
            times.append(nb)
            values.append(x)
            derivs.append(g_left)
        t = nb

    return DenseSolution(
        start_time=0.0,
        step=float(step),
        times=np.asarray(times, dtype=float),
        values=np.asarray(values, dtype=float),
        derivs=np.asarray(derivs, dtype=float),
        events=tuple(kn for kn in all_knots if kn < t_end - BREAK_TOL),
    )


def parabola_coefficients(a1: float, a2: float, eps: float, x1: float) -> tuple[float, float, float]:
    """Parabola bridging slopes a1 -> a2 over [p1-eps, p1+eps] through (p1, x1-ish).

    P(t) = A (t-p1)^2 + B (t-p1) + C matches the piecewise affine solution
    in both value and slope at the window edges: P(p1-eps) = x1 - a1 eps,
    P'(p1-eps) = a1, P'(p1+eps) = a2, P(p1+eps) = x1 + a2 eps.
    """
    if not (math.isfinite(eps) and eps > 0.0):
        raise ValueError("eps must be positive and finite")
    A = (a2 - a1) / (4.0 * eps)
    B = (a1 + a2) / 2.0
    C = (a2 - a1) * eps / 4.0 + x1
    return A, B, C


def corner_windows(params: Params, delta: float, zero_times, t_end: float) -> tuple[tuple[float, float], ...]:
    """Merged corner windows of half-width delta/min(a1,a2).

    One window around every coefficient switch time and one around each
    zero time plus the delay, clipped to [0, t_end].
    """
    if delta <= 0.0:
        return ()
    eps = delta / min(params.a1, params.a2)
    centers: list[float] = []
    T = params.period
    k = 0
    while k * T <= t_end + eps:
        for base in (k * T, k * T + params.p1):
            if -eps <= base <= t_end + eps:
                centers.append(base)
        k += 1
    for z in zero_times:
        c = z + 1.0
        if -eps <= c <= t_end + eps:
            centers.append(c)
    centers.sort()
    merged: list[list[float]] = []
    for c in centers:
        lo = max(0.0, c - eps)
        hi = min(t_end, c + eps)
        if hi <= lo:
            continue
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((w[0], w[1]) for w in merged)


def compare_exact_smoothed(params: Params, delta: float, h: float, t_end: float,
                           *, h_smoothed: float | None = None,
                           step: float | None = None) -> dict:
    """Sup-norm deviation between the exact and the smoothed solution.

    The exact solution starts from the constant history h; the smoothed one
    from h_smoothed (default h). Deviations are reported overall and
    outside the corner windows, together with a step-halving error estimate
    for the integrator (so a caller can tell corner mismatch, which is
    O(delta), from discretization error).
    """
    if not math.isfinite(t_end) or t_end <= 1.0:
        raise ValueError("t_end must exceed the delay 1")
    smoothing = SmoothingSpec(delta=delta)
    exact_path = propagate(params, ConstantHistory(h), t_end)
    hs = h if h_smoothed is None else h_smoothed
    if step is None:
        step = default_step(smoothing)
    sol = integrate(params, smoothing, hs, t_end, step)
    half = integrate(params, smoothing, hs, t_end, step / 2.0)

    keep = sol.times >= 0.0
    base_ts = sol.times[keep]
    mids = 0.5 * (base_ts[:-1] + base_ts[1:])
    ts = np.unique(np.concatenate([base_ts, mids]))

    xs = sol.values_at(ts)
    xh = half.values_at(ts)
    xe = np.interp(ts, exact_path.times, exact_path.values)

    dev = np.abs(xs - xe)
    est = max(float(np.max(np.abs(xs - xh))) * 16.0 / 15.0, 1e-12)

    windows = corner_windows(params, delta, path_zeros(exact_path), t_end)
    outside = np.ones(len(ts), dtype=bool)
    for lo, hi in windows:
        outside &= ~((ts >= lo) & (ts <= hi))

    return {
        "max_dev_outside_corners": float(dev[outside].max()) if outside.any() else 0.0,
        "max_dev_overall": float(dev.max()),
        "corner_windows": windows,
        "integrator_error_estimate": est,
    }


def one_period_multiplier(params: Params, h_center: float, eps0: float = 1e-6) -> float:
    """Central-difference slope of the one-period return map at h_center."""
    if not (math.isfinite(eps0) and eps0 > 0.0):
        raise ValueError("eps0 must be positive and finite")
    T = params.period
    plus = propagate(params, ConstantHistory(h_center + eps0), T)
    minus = propagate(params, ConstantHistory(h_center - eps0), T)
    return (plus.end_value - minus.end_value) / (2.0 * eps0)


def _two_zero_shape_ok(params: Params, path) -> bool:
    T = params.period
    zs = [z for z in path_zeros(path) if z < T - 1e-9]
    return len(zs) == 2 and zs[-1] < T - 1.0


def perturbation_growth(params: Params, h_star: float, eps0: float) -> float:
    """Measured one-period growth factor of a perturbation off h_star.

    Requires a validated unstable period-T orbit; propagates h_star +- eps0
    exactly over one period and returns the mean one-sided quotient
    (x(T) - h_star) / (+-eps0), which matches the return-map slope m.
    """
    if not (1e-8 <= eps0 <= 1e-3):
        raise ValueError("eps0 must lie in [1e-8, 1e-3]")
    verdicts = classify(params)
    if not any(v.kind == "UnstableT" and v.validated for v in verdicts):
        raise NotApplicable("no validated unstable period-T orbit at these parameters")
    T = params.period
    quots = []
    for sgn in (1.0, -1.0):
        path = propagate(params, ConstantHistory(h_star + sgn * eps0), T)
        if not _two_zero_shape_ok(params, path):
            raise ShapeLost(f"orbit from {h_star + sgn * eps0!r} left the two-zero layout")
        quots.append((path.end_value - h_star) / (sgn * eps0))
    return 0.5 * (quots[0] + quots[1])
