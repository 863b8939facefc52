"""Ground-truth dominance checking via survival-function comparison.

P is stochastically below Q exactly when F_P(k) >= F_Q(k) for every k
(equivalently S_P <= S_Q pointwise). On finite supports the scan is exact
rational arithmetic; on unbounded supports the scan runs to a cap and the
remaining tail is either bounded by epsilon, or certified analytically when
the pair's likelihood ratio has a closed-form monotone tail phase.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

from . import likelihood
from .distributions import DistributionSpec, joint_support, mass_iter, tail_cap
from .errors import InfiniteSupport, UnboundedProfile, UnsupportedPair
from .exact import INF


class Relation(enum.Enum):
    LE_ST = "le_st"
    GE_ST = "ge_st"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Exact:
    pass


@dataclass(frozen=True)
class Truncated:
    k_cap: int
    tail_bound: float
    certified: bool = False


Mode = Union[Exact, Truncated]


@dataclass(frozen=True)
class DominanceReport:
    relation: Relation
    crossings: tuple  # first k of each new strict sign of F_P - F_Q
    mode: Mode


@dataclass(frozen=True)
class OraclePolicy:
    k_cap: Optional[int] = None
    epsilon: float = 1e-12
    hard_cap: int = 10**6


def _paired_cdf_scan(P, Q, hi, *, prefer_exact=True):
    """Yield (k, F_P(k), F_Q(k)) for k from the joint minimum up to hi."""
    js = joint_support(P, Q)
    it_p = mass_iter(P, prefer_exact=prefer_exact)
    it_q = mass_iter(Q, prefer_exact=prefer_exact)
    head_p = next(it_p, None)
    head_q = next(it_q, None)
    fp = fq = 0
    for k in range(js.k_min, hi + 1):
        if head_p is not None and head_p[0] == k:
            fp = fp + head_p[1]
            head_p = next(it_p, None)
        if head_q is not None and head_q[0] == k:
            fq = fq + head_q[1]
            head_q = next(it_q, None)
        yield k, fp, fq


def _relation_from_signs(saw_above: bool, saw_below: bool) -> Relation:
    if saw_above and saw_below:
        return Relation.INCOMPARABLE
    if saw_above:
        return Relation.LE_ST  # F_P >= F_Q pointwise
    if saw_below:
        return Relation.GE_ST
    return Relation.EQUAL


def dominance_exact(P: DistributionSpec, Q: DistributionSpec) -> DominanceReport:
    """Exact survival comparison; both supports must be finite."""
    js = joint_support(P, Q)
    if not js.finite:
        raise InfiniteSupport("exact dominance needs finite supports; use dominance_truncated")
    crossings = []
    prev_sign = 0
    saw_above = saw_below = False
    for k, fp, fq in _paired_cdf_scan(P, Q, js.k_max):
        sign = 1 if fp > fq else (-1 if fp < fq else 0)
        if sign != 0:
            if prev_sign != 0 and sign != prev_sign:
                crossings.append(k)
            prev_sign = sign
            saw_above |= sign > 0
            saw_below |= sign < 0
    return DominanceReport(_relation_from_signs(saw_above, saw_below), tuple(crossings), Exact())


def _tail_certifies(P, Q, k_cap) -> bool:
    """True when lambda(k) <= 1 for every k > k_cap, by closed-form shape.

    Combined with F_P >= F_Q on [0, k_cap] this pins S_P <= S_Q everywhere:
    a final decreasing phase needs lambda(k_cap + 1) <= 1; a final
    increasing phase needs the limit of the survival ratio to stay <= 1.
    """
    if not likelihood.has_closed_ratio(P, Q):
        return False
    try:
        profile = likelihood.likelihood_profile(P, Q)
    except (UnboundedProfile, UnsupportedPair):
        return False
    if profile.turning_index is not None and profile.turning_index > k_cap:
        return False
    if profile.shape in (
        likelihood.Shape.DECREASING,
        likelihood.Shape.INCREASING_THEN_DECREASING,
    ):
        return likelihood.point_ratio(P, Q, k_cap + 1) <= 1
    rho = _survival_ratio_limit(P, Q)
    return rho is not None and rho <= 1


def _survival_ratio_limit(P, Q):
    """limsup of S_P(k)/S_Q(k), when the pair has a closed form (else None)."""
    if not likelihood.has_closed_ratio(P, Q):
        return None
    try:
        return likelihood.tail_conditions(P, Q).extreme_tail_ratio
    except (UnboundedProfile, UnsupportedPair):
        return None


def _mass_flip_bound(P, Q, rho, hard_cap: int) -> Optional[int]:
    """A k beyond which the mass ratio stays on one side of 1, by closed form.

    For rho = inf: smallest k with lambda(j) > 1 for all j >= k (so the
    survival functions must have crossed at or before k). Mirrored for
    rho = 0. Walks log(lambda) via the consecutive ratio; None if the walk
    hits the hard cap or the pair has no closed ratio.
    """
    js = joint_support(P, Q)
    if js.finite:
        return None
    lam0 = likelihood.point_ratio(P, Q, js.k_min)
    if lam0 == INF or lam0 == 0:
        return None
    log_lam = math.log(float(lam0))
    want_above = rho == INF
    k = js.k_min
    while k < hard_cap:
        try:
            q = float(likelihood.consecutive_ratio(P, Q, k))
        except (UnsupportedPair, ValueError):
            return None
        if q == 0:
            # the mass ratio drops to zero and one support has ended
            return k + 1 if not want_above else None
        if q < 0:
            return None
        settled = (log_lam > 0 and q >= 1) if want_above else (log_lam < 0 and q <= 1)
        if settled:
            return k
        log_lam += math.log(q)
        k += 1
    return None


def dominance_truncated(
    P: DistributionSpec,
    Q: DistributionSpec,
    k_cap: Optional[int] = None,
    epsilon: float = 1e-12,
    hard_cap: int = 10**6,
) -> DominanceReport:
    """Survival comparison on k <= k_cap with an epsilon bound on the rest.

    Incomparability found inside the scan window is definite. A one-sided
    pattern is reported as a relation only when the remaining joint tail
    mass is below epsilon, or when a closed-form half-monotone profile
    certifies the tail analytically (certified=True in the mode). When the
    closed form says the survival ratio diverges against the scanned
    pattern, the window is extended to expose the far crossing (exact
    arithmetic) or the verdict flips to a certified incomparability.
    """
    rho = _survival_ratio_limit(P, Q)
    if k_cap is None:
        k_cap = tail_cap(P, Q, epsilon, hard_cap)
        if rho == INF or rho == 0:
            # a far-tail flip may hide below epsilon; cover the analytic bound
            bound = _mass_flip_bound(P, Q, rho, hard_cap)
            if bound is not None:
                k_cap = min(max(k_cap, bound + 2), hard_cap)
    crossings = []
    prev_sign = 0
    saw_above = saw_below = False
    fp = fq = 0
    for k, fp, fq in _paired_cdf_scan(P, Q, k_cap):
        if (isinstance(fp, float) or isinstance(fq, float)) and (
            (1.0 - float(fp)) + (1.0 - float(fq)) < 1e-15
        ):
            # both float cdfs are saturated; deeper differences are rounding
            # noise, and any analytic far-tail facts are handled below
            break
        sign = 1 if fp > fq else (-1 if fp < fq else 0)
        if sign != 0:
            if prev_sign != 0 and sign != prev_sign:
                crossings.append(k)
            prev_sign = sign
            saw_above |= sign > 0
            saw_below |= sign < 0
    tail_bound = max(0.0, 1.0 - float(fp)) + max(0.0, 1.0 - float(fq))
    relation = _relation_from_signs(saw_above, saw_below)

    certified = False
    if relation == Relation.LE_ST:
        certified = _tail_certifies(P, Q, k_cap)
        if not certified and rho is not None and rho > 1:
            # analytically, S_P > S_Q far out; the window already has the
            # other strict sign, so the pair is certainly incomparable
            relation = Relation.INCOMPARABLE
            certified = True
    elif relation == Relation.GE_ST:
        certified = _tail_certifies(Q, P, k_cap)
        if not certified and rho is not None and rho < 1:
            relation = Relation.INCOMPARABLE
            certified = True
    if relation not in (Relation.INCOMPARABLE,) and not certified and tail_bound > epsilon:
        relation = Relation.UNKNOWN
    return DominanceReport(relation, tuple(crossings), Truncated(k_cap, tail_bound, certified))


def dominance(P: DistributionSpec, Q: DistributionSpec, policy: OraclePolicy = OraclePolicy()) -> DominanceReport:
    """Exact on finite supports, truncated otherwise."""
    if joint_support(P, Q).finite:
        return dominance_exact(P, Q)
    return dominance_truncated(P, Q, policy.k_cap, policy.epsilon, policy.hard_cap)


def crossing_points(P: DistributionSpec, Q: DistributionSpec, k_cap: Optional[int] = None) -> list:
    """The k values where the cdf difference changes strict sign."""
    if joint_support(P, Q).finite and k_cap is None:
        return list(dominance_exact(P, Q).crossings)
    return list(dominance_truncated(P, Q, k_cap).crossings)


def survival_witnesses(P: DistributionSpec, Q: DistributionSpec, k_cap: Optional[int] = None):
    """(k_minus, k_plus) with S_P(k_minus) < S_Q(k_minus) and S_P(k_plus) > S_Q(k_plus).

    Each witness is the earliest k where that side of the domination fails
    (a cdf difference F_P(k) - F_Q(k) > 0 means S_P(k+1) < S_Q(k+1) and
    vice versa). Returns None when no witness pair exists in the scan.
    """
    js = joint_support(P, Q)
    if js.finite:
        hi = js.k_max
    else:
        hi = k_cap if k_cap is not None else tail_cap(P, Q)
    k_minus = k_plus = None
    for k, fp, fq in _paired_cdf_scan(P, Q, hi):
        if k_minus is None and fp > fq:
            k_minus = k + 1
        if k_plus is None and fp < fq:
            k_plus = k + 1
        if k_minus is not None and k_plus is not None:
            return k_minus, k_plus
    return None
