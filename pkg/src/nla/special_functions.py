"""Regularized incomplete gamma and beta functions at integer parameters.

Every closed form in this package needs these functions only with positive
integer first arguments, where both reduce to finite tail sums of Poisson
and binomial distributions.  Evaluating those sums directly, with exact
binomial coefficients and compensated accumulation, keeps the module free
of external special-function dependencies and accurate to rounding.
"""

from __future__ import annotations

import math

__all__ = [
    "reg_gamma_q",
    "reg_gamma_p",
    "log_reg_gamma_q",
    "reg_beta_i",
    "reg_beta_i_stream",
]

# math.comb is exact but the resulting integers become enormous for large
# trial counts; above this the per-term log-domain path takes over.
_COMB_LIMIT = 500

# x^k/k! can overflow the float range once x is large even though the final
# Q value is bounded; switch reg_gamma_q to its log form past this point.
_GAMMA_DIRECT_LIMIT = 500.0


def _check_gamma_args(a: int, x: float) -> None:
    if int(a) != a or a < 1:
        raise ValueError(f"first parameter must be a positive integer, got {a!r}")
    if math.isnan(x) or x < 0:
        raise ValueError(f"second argument must be nonnegative, got {x!r}")


def reg_gamma_q(a: int, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) for integer a >= 1.

    Computed as the Poisson cumulative sum e^-x * sum_{k<a} x^k/k!.
    Monotone nonincreasing in x, with Q(a, 0) = 1.
    """
    _check_gamma_args(a, x)
    a = int(a)
    if x == 0.0:
        return 1.0
    if x > _GAMMA_DIRECT_LIMIT:
        return math.exp(log_reg_gamma_q(a, x))
    terms = [1.0]
    t = 1.0
    for k in range(1, a):
        t *= x / k
        terms.append(t)
    return min(1.0, math.exp(-x) * math.fsum(terms))


def reg_gamma_p(a: int, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x) = 1 - Q(a, x)."""
    return 1.0 - reg_gamma_q(a, x)


def log_reg_gamma_q(a: int, x: float) -> float:
    """log Q(a, x), usable where Q itself underflows (x far above a)."""
    _check_gamma_args(a, x)
    a = int(a)
    if x == 0.0:
        return 0.0
    lx = math.log(x)
    logs = [k * lx - math.lgamma(k + 1) for k in range(a)]
    peak = max(logs)
    total = math.fsum(math.exp(v - peak) for v in logs)
    return min(0.0, -x + peak + math.log(total))


def _check_beta_args(x: float, a: int, b: int) -> None:
    if math.isnan(x) or not 0.0 <= x <= 1.0:
        raise ValueError(f"beta argument must lie in [0, 1], got {x!r}")
    if int(a) != a or a < 1 or int(b) != b or b < 1:
        raise ValueError(f"beta parameters must be positive integers, got {a!r}, {b!r}")


def reg_beta_i(x: float, a: int, b: int) -> float:
    """Regularized incomplete beta I_x(a, b) for integer a, b >= 1.

    Computed as the binomial tail sum_{t=a}^{n} C(n, t) x^t (1-x)^(n-t)
    with n = a + b - 1 trials.  Monotone nondecreasing in x; I_0 = 0 and
    I_1 = 1 exactly.
    """
    _check_beta_args(x, a, b)
    a, b = int(a), int(b)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    n = a + b - 1
    if n <= _COMB_LIMIT:
        q = 1.0 - x
        terms = [math.comb(n, t) * x**t * q ** (n - t) for t in range(a, n + 1)]
    else:
        lx = math.log(x)
        lq = math.log1p(-x)
        lgn = math.lgamma(n + 1)
        terms = [
            math.exp(
                lgn
                - math.lgamma(t + 1)
                - math.lgamma(n - t + 1)
                + t * lx
                + (n - t) * lq
            )
            for t in range(a, n + 1)
        ]
    return min(1.0, math.fsum(terms))


def reg_beta_i_stream(x: float, a: int):
    """Yield I_x(a, b) for b = 1, 2, 3, ... without re-summing per value.

    Grows the binomial tail one trial at a time: with n = a + b - 1 trials,
    I_x(a, b+1) = I_x(a, b) + C(n, a-1) x^a (1-x)^(n-a+1).  Series-style
    callers consume this instead of calling reg_beta_i once per term.
    """
    if math.isnan(x) or not 0.0 <= x <= 1.0:
        raise ValueError(f"beta argument must lie in [0, 1], got {x!r}")
    if int(a) != a or a < 1:
        raise ValueError(f"beta parameter must be a positive integer, got {a!r}")
    a = int(a)
    xa = x**a
    q = 1.0 - x
    value = xa
    yield min(1.0, value)
    comb = float(a)  # C(n, a-1) at n = a
    qpow = q  # (1-x)^(n-a+1) at n = a
    n = a
    while True:
        value += comb * xa * qpow
        yield min(1.0, value)
        comb *= (n + 1) / (n - a + 2)
        n += 1
        qpow *= q
