"""Parameter-derivative identities for binomial and negbinomial cdfs.

These are the analytic devices behind the coupled-parameter cdf-gap
argument: closed-form d/dp of the cdfs, the gap functions at coupled
parameters, and a sign-change counter for the gap derivative. Everything
here is numerically checkable; finite-difference checks run against exact
rational cdf evaluations wherever the parameters allow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .distributions import Binomial, NegBinomial, cdf, pmf
from .errors import ParameterOrder
from .exact import parse_scalar


@dataclass(frozen=True)
class DerivativeCheck:
    analytic: float
    finite_difference: float
    h: float
    abs_error: float


def _bin_pmf(n: int, p, k: int):
    """Binomial mass with the n = 0 convention: a point mass at 0."""
    if n == 0:
        return 1 if k == 0 else 0
    if k < 0 or k > n:
        return 0
    return pmf(Binomial(n, p), k)


def binom_cdf_derivative(n: int, p, k: int) -> float:
    """d/dp of the binomial cdf at k: the telescoped value -n b_{n-1,p}({k})."""
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"need n >= 1 and 0 <= k <= n, got n={n}, k={k}")
    return -n * float(_bin_pmf(n - 1, parse_scalar(p), k))


def binom_cdf_derivative_check(n: int, p, k: int, h: float = 1e-5) -> DerivativeCheck:
    """Central finite difference of the exact rational cdf against the formula."""
    p = Fraction(float(p))
    step = Fraction(float(h))
    upper = cdf(Binomial(n, p + step), k)
    lower = cdf(Binomial(n, p - step), k)
    fd = float((upper - lower) / (2 * step))
    analytic = binom_cdf_derivative(n, p, k)
    return DerivativeCheck(analytic, fd, float(h), abs(analytic - fd))


def _negbin_partial_cdf(r, p, k: int):
    """b-minus_{r,p}({0,...,k-1}); exact for integer r, float otherwise."""
    r = parse_scalar(r)
    p = parse_scalar(p)
    spec = NegBinomial(r, p)
    if k <= 0:
        return 0
    return cdf(spec, k - 1)


def negbinom_cdf_derivative(r, p, k: int) -> float:
    """d/dp of the negbinomial cdf of {0..k-1}: k C(r+k-1,k) (1-p)^(k-1) p^(r-1)."""
    if k < 1:
        raise ValueError(f"need k >= 1, got k={k}")
    r, p = float(r), float(p)
    if not 0 < p < 1:
        raise ValueError(f"need p in (0,1), got {p}")
    log_coef = math.lgamma(r + k) - math.lgamma(r) - math.lgamma(k + 1)
    return k * math.exp(log_coef + (k - 1) * math.log1p(-p) + (r - 1) * math.log(p))


def negbinom_cdf_derivative_check(r, p, k: int, h: float = 1e-5) -> DerivativeCheck:
    r_scalar = parse_scalar(r)
    p_mid = float(p)
    upper = _negbin_partial_cdf(r_scalar, Fraction(p_mid) + Fraction(h), k)
    lower = _negbin_partial_cdf(r_scalar, Fraction(p_mid) - Fraction(h), k)
    fd = float((upper - lower) / (2 * Fraction(h)))
    analytic = negbinom_cdf_derivative(float(r), p_mid, k)
    return DerivativeCheck(analytic, fd, h, abs(analytic - fd))


def binomial_cdf_gap(n1: int, n2: int, k: int, p) -> float:
    """cdf gap at coupled parameters: F_{n1, pi(p)}(k) - F_{n2, p}(k).

    pi(p) = 1 - (1-p)^(n2/n1) matches the void probabilities of the two
    binomials; the gap vanishes at p = 0 and p = 1 and is nonnegative in
    between. Only 1 <= k <= n1-1 is nontrivial.
    """
    if not n1 < n2:
        raise ParameterOrder(f"need n1 < n2, got {n1} >= {n2}")
    if not 1 <= k <= n1 - 1:
        raise ValueError(f"need 1 <= k <= n1-1, got k={k}")
    p = float(p)
    if not 0 <= p <= 1:
        raise ValueError(f"need p in [0,1], got {p}")
    ratio = n2 / n1
    coupled = -math.expm1(ratio * math.log1p(-p)) if p < 1 else 1.0
    return float(cdf(Binomial(n1, coupled), k)) - float(cdf(Binomial(n2, p), k))


def negbinomial_cdf_gap(r1, r2, k: int, p) -> float:
    """cdf gap at coupled parameters: the r1 law at p^(r2/r1) minus the r2 law at p.

    Requires r2 < r1 (the exponent r2/r1 must be < 1); rejects rather than
    reorders, since the remaining reduction belongs to the ordering layer.
    """
    r1f, r2f = float(r1), float(r2)
    if not r2f < r1f:
        raise ParameterOrder(f"need r2 < r1, got r2={r2f} >= r1={r1f}")
    if k < 1:
        raise ValueError(f"need k >= 1, got k={k}")
    p = float(p)
    if not 0 < p <= 1:
        raise ValueError(f"need p in (0,1], got {p}")
    coupled = p ** (r2f / r1f)
    upper = _negbin_partial_cdf(parse_scalar(r1), parse_scalar(coupled), k)
    lower = _negbin_partial_cdf(parse_scalar(r2), parse_scalar(p), k)
    return float(upper) - float(lower)


def binomial_gap_derivative(n1: int, n2: int, k: int, p) -> float:
    """Closed-form derivative of binomial_cdf_gap in p."""
    if not n1 < n2:
        raise ParameterOrder(f"need n1 < n2, got {n1} >= {n2}")
    if not 1 <= k <= n1 - 1:
        raise ValueError(f"need 1 <= k <= n1-1, got k={k}")
    p = float(p)
    if not 0 < p < 1:
        raise ValueError(f"need p in (0,1), got {p}")
    ratio = n2 / n1
    q_pow = (1 - p) ** ratio  # (1-p)^(n2/n1)
    bracket = math.comb(n2 - 1, k) * (p / (1 - p)) ** k - math.comb(n1 - 1, k) * (
        (1 - q_pow) / q_pow
    ) ** k
    return n2 * (1 - p) ** (n2 - 1) * bracket


def binomial_gap_sign_changes(
    n1: int, n2: int, k: int, grid: Optional[Sequence[float]] = None
) -> int:
    """Strict sign alternations of the gap derivative across a grid in (0,1)."""
    if grid is None:
        grid = [i / 1000 for i in range(1, 1000)]
    changes = 0
    last = 0
    for p in grid:
        value = binomial_gap_derivative(n1, n2, k, p)
        sign = (value > 0) - (value < 0)
        if sign != 0:
            if last != 0 and sign != last:
                changes += 1
            last = sign
    return changes
