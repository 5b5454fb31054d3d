"""One-way ANOVA with a self-contained F-distribution p-value.

The p-value comes from the regularized incomplete beta function, evaluated
with the continued-fraction expansion (modified Lentz) and the symmetry
switch at x > (a+1)/(a+b+2). Sums of squares use math.fsum, which is
exactly rounded: permuting observations within groups cannot change a
single output bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DataError, NumericError

_FPMIN = 1e-300
_CF_EPS = 1e-16
_CF_MAX_ITER = 500


@dataclass(frozen=True)
class AnovaResult:
    parameter: str
    factor: str
    k: int  # group count
    N: int  # total observations
    F: float
    df1: int
    df2: int
    p_value: float
    significant: bool
    alpha: float
    flag: str = ""  # "", "infinite-F", "undefined"

    def to_record(self) -> dict:
        return {
            "parameter": self.parameter,
            "factor": self.factor,
            "k": self.k,
            "N": self.N,
            "F": None if math.isnan(self.F) else self.F,
            "df1": self.df1,
            "df2": self.df2,
            "p_value": None if math.isnan(self.p_value) else self.p_value,
            "significant": self.significant,
            "alpha": self.alpha,
            "flag": self.flag,
        }

    @staticmethod
    def from_record(rec: dict) -> "AnovaResult":
        return AnovaResult(
            parameter=rec["parameter"],
            factor=rec["factor"],
            k=rec["k"],
            N=rec["N"],
            F=float("nan") if rec["F"] is None else rec["F"],
            df1=rec["df1"],
            df2=rec["df2"],
            p_value=float("nan") if rec["p_value"] is None else rec["p_value"],
            significant=rec["significant"],
            alpha=rec["alpha"],
            flag=rec["flag"],
        )


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise NumericError(f"incomplete beta continued fraction failed for a={a}, b={b}, x={x}")


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b); absolute error <= 1e-10."""
    if not (a > 0 and b > 0):
        raise NumericError(f"reg_inc_beta requires a, b > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise NumericError(f"reg_inc_beta requires x in [0,1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_cdf(f: float, df1: float, df2: float) -> float:
    """CDF of the F distribution, monotone non-decreasing in f."""
    if df1 < 1 or df2 < 1:
        raise NumericError(f"f_cdf requires df1, df2 >= 1, got ({df1}, {df2})")
    if f < 0:
        raise NumericError(f"f_cdf requires F >= 0, got {f}")
    if f == 0.0:
        return 0.0
    if math.isinf(f):
        return 1.0
    x = df1 * f / (df1 * f + df2)
    return reg_inc_beta(df1 / 2.0, df2 / 2.0, x)


def anova_oneway(
    groups: Sequence[Sequence[float]],
    *,
    alpha: float = 0.05,
    parameter: str = "",
    factor: str = "",
) -> AnovaResult:
    """Classic one-way fixed-effects ANOVA over k groups.

    F = [SSB/(k-1)] / [SSW/(N-k)]; p = 1 - F_cdf(F). Degenerate cases:
    SSW = 0 with SSB > 0 flags an infinite F with p = 0; all-constant data
    flags the result undefined (F and p are NaN).
    """
    k = len(groups)
    if k < 2:
        raise DataError(f"ANOVA needs at least 2 groups, got {k}")
    sizes = [len(g) for g in groups]
    if any(n == 0 for n in sizes):
        raise DataError("every ANOVA group needs at least one observation")
    N = sum(sizes)
    if N <= k:
        raise DataError(f"ANOVA needs N > k, got N={N}, k={k}")

    means = [math.fsum(g) / len(g) for g in groups]
    grand = math.fsum(math.fsum(g) for g in groups) / N
    ssb = math.fsum(n * (m - grand) ** 2 for n, m in zip(sizes, means))
    ssw = math.fsum(math.fsum((x - m) ** 2 for x in g) for g, m in zip(groups, means))
    df1, df2 = k - 1, N - k

    if ssw == 0.0:
        if ssb == 0.0:
            return AnovaResult(
                parameter, factor, k, N, float("nan"), df1, df2, float("nan"),
                False, alpha, flag="undefined",
            )
        return AnovaResult(
            parameter, factor, k, N, float("inf"), df1, df2, 0.0,
            True, alpha, flag="infinite-F",
        )

    F = (ssb / df1) / (ssw / df2)
    p = 1.0 - f_cdf(F, df1, df2)
    # Clamp roundoff: 1 - cdf can stray a ulp outside [0,1].
    p = min(1.0, max(0.0, p))
    return AnovaResult(parameter, factor, k, N, F, df1, df2, p, p < alpha, alpha)


def anova_by_factor(
    values_by_level: Mapping[str, Sequence[float]],
    *,
    parameter: str,
    factor: str,
    alpha: float = 0.05,
) -> AnovaResult:
    """ANOVA over observations grouped by the levels of one learner factor."""
    levels = sorted(values_by_level)
    groups = [list(values_by_level[lv]) for lv in levels]
    return anova_oneway(groups, alpha=alpha, parameter=parameter, factor=factor)
