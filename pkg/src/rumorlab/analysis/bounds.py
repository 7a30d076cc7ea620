"""Closed-form tail bounds and the runtime guarantees built on them.

Round bounds use base-2 logarithms; natural logs appear only in the slack
term eps and inside exponents.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

from ..simulator import ceil_log2


class ChernoffVariant(enum.Enum):
    ADDITIVE = "additive"  # Pr[X > E+t], Pr[X < E-t] <= exp(-2t^2/n)
    MULT_LOWER = "mult_lower"  # Pr[X < (1-eps)E] <= exp(-eps^2 E/2)
    MULT_UPPER = "mult_upper"  # Pr[X > (1+eps)E] <= exp(-eps^2 E/3)
    CROSSOVER = "crossover"  # Pr[X > t] <= 2^-t for t > 2eE


def chernoff_bounds(expectation: float, n_vars: int, t_or_eps: float, variant: ChernoffVariant) -> float:
    """Right-hand side of the requested Chernoff inequality for X = sum of n_vars [0,1] variables."""
    if n_vars < 1:
        raise ValueError("need at least one variable")
    if variant is ChernoffVariant.ADDITIVE:
        if t_or_eps < 0:
            raise ValueError("deviation t must be non-negative")
        return math.exp(-2.0 * t_or_eps**2 / n_vars)
    if variant in (ChernoffVariant.MULT_LOWER, ChernoffVariant.MULT_UPPER):
        if t_or_eps <= 0 or expectation < 0:
            raise ValueError("relative deviation must be positive")
        denom = 2.0 if variant is ChernoffVariant.MULT_LOWER else 3.0
        return math.exp(-(t_or_eps**2) * expectation / denom)
    if not t_or_eps > 2 * math.e * expectation:
        raise ValueError("crossover bound needs t > 2e E[X]")
    return 2.0 ** (-t_or_eps)


def geometric_sum_bound(n_vars: int, delta: float) -> float:
    """Pr[X >= (1+delta) E[X]] bound for a sum of n_vars i.i.d. geometric variables."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if n_vars < 1:
        raise ValueError("need at least one variable")
    return math.exp(-(delta**2) * (n_vars - 1) / (2.0 * (1.0 + delta)))


def _exponent(n: int, c: float) -> float:
    return (c - 1.0) ** 2 / (2.0 * c) * (ceil_log2(n - 1) - 1)


@dataclass(frozen=True)
class RuntimeBound:
    T: float
    failure_probability: float
    eps: float = 0.0
    p: float = 1.0

    def to_json(self) -> dict:
        return asdict(self)


def wu_runtime_bound(n: int, p: float, c: float) -> RuntimeBound:
    """Wakeup / random-crash GP: within T = (c/p)(ceil(log(n-1))+1) rounds,
    except with probability at most n exp(-((c-1)^2/2c)(ceil(log(n-1))-1))."""
    if n < 3:
        raise ValueError("the bound needs n >= 3")
    if c <= 1:
        raise ValueError("c must exceed 1")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    T = c / p * (ceil_log2(n - 1) + 1)
    return RuntimeBound(T, n * math.exp(-_exponent(n, c)), 0.0, p)


def rgp_eps(n: int) -> float:
    return math.sqrt(math.log(n) / (n - 1))


def rgp_runtime_bound(n: int, f: int, c: float) -> RuntimeBound:
    """Randomized GP against f adversarial crashes."""
    if n < 3:
        raise ValueError("the bound needs n >= 3")
    if c <= 1:
        raise ValueError("c must exceed 1")
    eps = rgp_eps(n)
    if not 0 <= f < (n - 1) * (1 - eps):
        raise ValueError(f"f={f} violates f < (n-1)(1-eps) = {(n - 1) * (1 - eps):.3f}")
    p = 1 - f / (n - 1)
    T = c / (p - eps) * (ceil_log2(n - 1) + 1)
    prob = n**3 / (n**2 - 1) * math.exp(-_exponent(n, c))
    return RuntimeBound(T, prob, eps, p)


@dataclass(frozen=True)
class DerandParams:
    delta: float
    c: float
    q: float
    t0: int
    c_asymptotic: float

    def to_json(self) -> dict:
        return asdict(self)


def _smallest_c(rhs: float) -> float:
    """Smallest c > 1 with (c-1)^2/(2c) >= rhs: the larger root of c^2 - 2(1+rhs)c + 1."""
    a = 1.0 + rhs
    return a + math.sqrt(a * a - 1.0)


def derand_params(n: int, t: int) -> DerandParams:
    """Slack delta, constant c, per-permutation failure probability q and t0 = ceil(delta t).

    c is the smallest value (nudged up by one ulp-scale step) for which the
    explicit q = n^3/(n^2-1) exp(-((c-1)^2/2c)(ceil(log(n-1))-1)) is below n^-2.
    ``c_asymptotic`` solves the same condition with q ~ n exp(-((c-1)^2/2c) log n).
    """
    if t < 1:
        raise ValueError("table size must be at least 1")
    if n < 4:
        raise ValueError("need n >= 4 for a non-degenerate exponent")
    delta_min = 2 * n / (t * math.log2(n))
    delta = max(math.e / n, math.nextafter(delta_min, math.inf))
    if delta >= 1:
        raise ValueError(f"t={t} too small: no delta < 1 with delta*t > 2n/log n")
    levels = ceil_log2(n - 1) - 1
    target = math.log(n**3 / (n**2 - 1)) + 2 * math.log(n)
    c = _smallest_c(target / levels)
    c = math.nextafter(c, math.inf)
    while n**3 / (n**2 - 1) * math.exp(-_exponent(n, c)) >= n**-2:
        c = math.nextafter(c, math.inf)
    q = n**3 / (n**2 - 1) * math.exp(-_exponent(n, c))
    c_asym = _smallest_c(3 * math.log(n) / math.log2(n))
    return DerandParams(delta, c, q, math.ceil(delta * t), c_asym)
