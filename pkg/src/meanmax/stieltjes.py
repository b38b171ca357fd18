"""Riemann-Stieltjes quadrature, integral means, and their analytic partials.

The integral mean of f against a strictly increasing weight m over [r, R] is

    mean(r, R; f) = (m(R) - m(r))^-1 * integral_r^R f dm.

When m carries a derivative the integral is computed as an adaptive composite
Simpson rule on f * m'; otherwise refined midpoint Stieltjes sums are used.
Both paths halve the panel width until two successive refinements agree within
tolerance, and both switch to a logarithmic substitution on wide positive
intervals, where uniform panels would be hopeless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DegenerateIntervalError,
    MissingDerivativeError,
    NonFiniteValueError,
    QuadratureError,
)
from .func1d import Domain, Function1D, batch_eval, evaluate

# Ratio R/r beyond which integration runs in u = ln x.
LOG_SUBSTITUTION_RATIO = 100.0


@dataclass
class Measure1D:
    """A strictly increasing weight m with an optional derivative.

    diverges declares that m(x) -> +inf as x -> b, which several transform
    hypotheses require.  Monotonicity is the caller's responsibility and is
    only spot-checked by validate().
    """

    m: Callable[[float], float]
    domain: Domain
    m_prime: Callable[[float], float] | None = None
    diverges: bool = False

    def validate(self, samples: int = 257) -> None:
        """Spot-check strict increase, positivity of m', and right-continuity at a."""
        dom = self.domain
        hi = dom.b if not dom.unbounded else max(dom.a, 1.0) * 1e6
        hi = hi - (hi - dom.a) * 1e-12
        if dom.a > 0 and hi / dom.a > LOG_SUBSTITUTION_RATIO:
            xs = np.geomspace(dom.a, hi, samples)
        else:
            xs = np.linspace(dom.a, hi, samples)
        ms = np.array([self.m(float(x)) for x in xs])
        if not np.all(np.isfinite(ms)):
            raise NonFiniteValueError("measure produced non-finite values")
        if np.any(np.diff(ms) <= 0):
            k = int(np.argmin(np.diff(ms)))
            raise DegenerateIntervalError(
                f"measure is not strictly increasing near x={xs[k]}"
            )
        if self.m_prime is not None:
            interior = xs[1:-1]
            dms = np.array([self.m_prime(float(x)) for x in interior])
            if np.any(dms <= 0):
                k = int(np.argmin(dms))
                raise DegenerateIntervalError(
                    f"measure derivative nonpositive at x={interior[k]}"
                )
        step = (xs[1] - xs[0]) * 1e-6
        if abs(self.m(dom.a + step) - self.m(dom.a)) > 1e-3 * max(
            1.0, abs(ms[-1] - ms[0])
        ):
            raise DegenerateIntervalError("measure looks discontinuous at the left endpoint")


def log_measure(a: float, b: float = math.inf) -> Measure1D:
    """The weight m(x) = ln x on [a, b), a > 0."""
    if a <= 0:
        raise ValueError("log measure needs a > 0")
    return Measure1D(
        m=np.log, m_prime=lambda x: 1.0 / x, domain=Domain(a, b), diverges=math.isinf(b)
    )


def identity_measure(a: float, b: float = math.inf) -> Measure1D:
    """The weight m(x) = x on [a, b)."""
    return Measure1D(
        m=lambda x: x, m_prime=lambda x: 1.0, domain=Domain(a, b), diverges=math.isinf(b)
    )


@dataclass
class QuadratureConfig:
    atol: float = 1e-10
    rtol: float = 1e-9
    base_panels: int = 64
    max_halvings: int = 20

    def __post_init__(self):
        if self.atol <= 0 or self.rtol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_halvings < 1:
            raise ValueError("max_halvings must be at least 1")

    def tolerance(self, value: float) -> float:
        return max(self.atol, self.rtol * abs(value))

    def scaled(self, factor: float) -> "QuadratureConfig":
        return QuadratureConfig(
            atol=self.atol * factor,
            rtol=self.rtol * factor,
            base_panels=self.base_panels,
            max_halvings=self.max_halvings,
        )


@dataclass
class MeanValue:
    value: float
    est_error: float
    panels_used: int


def _eval_many(fun: Callable[[float], float], xs: np.ndarray) -> np.ndarray:
    try:
        ys = batch_eval(fun, xs)
    except (OverflowError, ValueError, ZeroDivisionError) as exc:
        raise NonFiniteValueError(f"integrand evaluation failed: {exc}") from exc
    if not np.all(np.isfinite(ys)):
        k = int(np.argmax(~np.isfinite(ys)))
        raise NonFiniteValueError(f"non-finite integrand value at x={xs[k]}")
    return ys


def _simpson(fun, lo: float, hi: float, panels: int) -> float:
    xs = np.linspace(lo, hi, panels + 1)
    ys = _eval_many(fun, xs)
    h = (hi - lo) / panels
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-2:2].sum()))


def _adaptive(level_sum, extrapolate, cfg: QuadratureConfig) -> MeanValue:
    """Panel-doubling driver shared by the Simpson and midpoint paths."""
    n = max(2, cfg.base_panels + (cfg.base_panels % 2))
    prev = level_sum(n)
    for _ in range(cfg.max_halvings):
        n *= 2
        cur = level_sum(n)
        diff = abs(cur - prev)
        if diff <= cfg.tolerance(cur):
            return MeanValue(value=extrapolate(cur, prev), est_error=diff, panels_used=n)
        prev = cur
    raise QuadratureError(
        f"no convergence after {cfg.max_halvings} halvings (last delta {diff:.3e})"
    )


def _check_interval(g: Function1D, m: Measure1D, r: float, R: float) -> None:
    if not r < R:
        raise DegenerateIntervalError(f"need r < R, got r={r}, R={R}")
    if r < g.domain.a or R >= g.domain.b:
        raise DegenerateIntervalError(
            f"[{r}, {R}] not inside the integrand domain [{g.domain.a}, {g.domain.b})"
        )
    if r < m.domain.a or R >= m.domain.b:
        raise DegenerateIntervalError(
            f"[{r}, {R}] not inside the measure domain [{m.domain.a}, {m.domain.b})"
        )


def stieltjes_integral(
    g: Function1D,
    m: Measure1D,
    r: float,
    R: float,
    cfg: QuadratureConfig | None = None,
) -> MeanValue:
    """integral_r^R g dm by adaptive Simpson on g*m' or refined midpoint sums."""
    cfg = cfg or QuadratureConfig()
    _check_interval(g, m, r, R)
    ge = g.eval
    use_log = r > 0 and R / r > LOG_SUBSTITUTION_RATIO

    if m.m_prime is not None:
        dm = m.m_prime
        if use_log:
            lo, hi = math.log(r), math.log(R)

            def integrand(u):
                x = np.exp(u)
                return ge(x) * dm(x) * x

        else:
            lo, hi = r, R

            def integrand(x):
                return ge(x) * dm(x)

        return _adaptive(
            lambda n: _simpson(integrand, lo, hi, n),
            lambda cur, prev: cur + (cur - prev) / 15.0,
            cfg,
        )

    me = m.m

    def midpoint_sum(n: int) -> float:
        if use_log:
            ts = np.exp(np.linspace(math.log(r), math.log(R), n + 1))
            ts[0], ts[-1] = r, R
            mids = np.sqrt(ts[:-1] * ts[1:])
        else:
            ts = np.linspace(r, R, n + 1)
            mids = 0.5 * (ts[:-1] + ts[1:])
        gs = _eval_many(ge, mids)
        ms = _eval_many(me, ts)
        return float(np.sum(gs * np.diff(ms)))

    return _adaptive(
        midpoint_sum,
        lambda cur, prev: cur + (cur - prev) / 3.0,
        cfg,
    )


def integral_mean(
    f: Function1D,
    m: Measure1D,
    r: float,
    R: float,
    cfg: QuadratureConfig | None = None,
) -> MeanValue:
    """The normalized Stieltjes mean of f against m over [r, R]."""
    cfg = cfg or QuadratureConfig()
    _check_interval(f, m, r, R)
    dm = m.m(R) - m.m(r)
    if dm <= 0:
        raise DegenerateIntervalError(
            f"m(R) - m(r) = {dm} is not positive; the measure data is not increasing"
        )
    integral = stieltjes_integral(f, m, r, R, cfg)
    return MeanValue(
        value=integral.value / dm,
        est_error=integral.est_error / dm,
        panels_used=integral.panels_used,
    )


def mean_partial_r(
    f: Function1D,
    m: Measure1D,
    r: float,
    R: float,
    cfg: QuadratureConfig | None = None,
) -> float:
    """d/dr of the integral mean: m'(r) (m(R)-m(r))^-2 * integral_r^R (f(x)-f(r)) dm."""
    cfg = cfg or QuadratureConfig()
    if m.m_prime is None:
        raise MissingDerivativeError("partial in r needs the measure derivative at r")
    if not (f.domain.a < r and m.domain.a < r):
        raise DegenerateIntervalError("partials need r strictly inside the domain")
    fr = evaluate(f, r)
    shifted = Function1D(
        eval=lambda x: f.eval(x) - fr,
        domain=f.domain,
        locally_bounded=f.locally_bounded,
    )
    integral = stieltjes_integral(shifted, m, r, R, cfg)
    dm = m.m(R) - m.m(r)
    if dm <= 0:
        raise DegenerateIntervalError("measure does not increase over [r, R]")
    return m.m_prime(r) * integral.value / dm**2


def mean_partial_R(
    f: Function1D,
    m: Measure1D,
    r: float,
    R: float,
    cfg: QuadratureConfig | None = None,
) -> float:
    """d/dR of the integral mean: m'(R) (m(R)-m(r))^-2 * integral_r^R (f(R)-f(x)) dm."""
    cfg = cfg or QuadratureConfig()
    if m.m_prime is None:
        raise MissingDerivativeError("partial in R needs the measure derivative at R")
    if not (f.domain.a < r and m.domain.a < r):
        raise DegenerateIntervalError("partials need r strictly inside the domain")
    fR = evaluate(f, R)
    shifted = Function1D(
        eval=lambda x: fR - f.eval(x),
        domain=f.domain,
        locally_bounded=f.locally_bounded,
    )
    integral = stieltjes_integral(shifted, m, r, R, cfg)
    dm = m.m(R) - m.m(r)
    if dm <= 0:
        raise DegenerateIntervalError("measure does not increase over [r, R]")
    return m.m_prime(R) * integral.value / dm**2
