"""Special functions, Student-t / F distribution tails and test verdicts.

Everything here is scalar and pure. The regularized incomplete beta
function is the common kernel: both the t and the F distribution functions
reduce to it.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

from .errors import DomainError

# Lanczos approximation, g = 671/128, 14 terms (Numerical Recipes, 3rd ed.).
_LANCZOS_G = 5.24218750000000000
_LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 10_000

_BOUNDARY_CLAMP = 1e-12


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"log_gamma requires a finite x > 0, got {x!r}")
    if x < 0.5:
        # The series is tuned for x >= 0.5; shift up with Γ(x) = Γ(x+1)/x.
        return log_gamma(x + 1.0) - math.log(x)
    y = x
    tmp = x + _LANCZOS_G
    tmp = (x + 0.5) * math.log(tmp) - tmp
    ser = 0.999999999999997092
    for c in _LANCZOS_COEF:
        y += 1.0
        ser += c / y
    return tmp + math.log(_SQRT_2PI * ser / x)


def log_beta(a: float, b: float) -> float:
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for I_x(a, b), modified Lentz evaluation."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})"
    )


def _check_beta_args(x, a, b):
    if not (a > 0 and b > 0) or not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"incomplete beta needs a > 0 and b > 0, got a={a!r}, b={b!r}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"incomplete beta needs 0 <= x <= 1, got x={x!r}")


def _reg_inc_beta_pair(x: float, a: float, b: float):
    """Return ``(I_x(a,b), 1 - I_x(a,b))``, each computed without cancellation
    where the continued fraction allows it."""
    if x == 0.0:
        return 0.0, 1.0
    if x == 1.0:
        return 1.0, 0.0
    log_front = (
        a * math.log(x) + b * math.log1p(-x) - log_beta(a, b)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        lower = math.exp(log_front) * _beta_cf(x, a, b) / a
        return lower, 1.0 - lower
    upper = math.exp(log_front) * _beta_cf(1.0 - x, b, a) / b
    return 1.0 - upper, upper


def _clamp_unit(p: float) -> float:
    if p < 0.0:
        if p < -_BOUNDARY_CLAMP:
            raise ArithmeticError(f"probability {p} below 0")
        return 0.0
    if p > 1.0:
        if p > 1.0 + _BOUNDARY_CLAMP:
            raise ArithmeticError(f"probability {p} above 1")
        return 1.0
    return p


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Uses the continued fraction directly for ``x < (a+1)/(a+b+2)`` and the
    symmetry ``I_x(a,b) = 1 - I_{1-x}(b,a)`` otherwise.
    """
    _check_beta_args(x, a, b)
    return _clamp_unit(_reg_inc_beta_pair(x, a, b)[0])


def reg_inc_beta_complement(x: float, a: float, b: float) -> float:
    """``1 - I_x(a, b)`` without cancellation in the upper tail."""
    _check_beta_args(x, a, b)
    return _clamp_unit(_reg_inc_beta_pair(x, a, b)[1])


def _check_df(df, name="df"):
    if not df > 0 or not math.isfinite(df):
        raise DomainError(f"{name} must be positive, got {df!r}")


def t_tail(t: float, df: float) -> float:
    """P(T > |t|), the one-sided tail beyond ``|t|``."""
    _check_df(df)
    if math.isnan(t):
        raise DomainError("t statistic is NaN")
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return 0.5 * reg_inc_beta(x, 0.5 * df, 0.5)


def t_cdf(t: float, df: float) -> float:
    """P(T <= t) for Student's t with ``df`` degrees of freedom."""
    tail = t_tail(t, df)
    return 1.0 - tail if t > 0 else tail


@functools.lru_cache(maxsize=4096)
def t_two_tailed(t: float, df: float) -> float:
    """Two-tailed p-value P(|T| >= |t|)."""
    return min(1.0, 2.0 * t_tail(t, df))


def f_cdf(f: float, df1: float, df2: float) -> float:
    """P(F <= f) for the F distribution with (df1, df2) degrees of freedom."""
    _check_df(df1, "df1")
    _check_df(df2, "df2")
    if math.isnan(f) or f < 0:
        raise DomainError(f"F statistic must be >= 0, got {f!r}")
    if math.isinf(f):
        return 1.0
    x = df1 * f / (df1 * f + df2)
    return reg_inc_beta(x, 0.5 * df1, 0.5 * df2)


@functools.lru_cache(maxsize=4096)
def f_sf(f: float, df1: float, df2: float) -> float:
    """Upper-tail probability P(F > f)."""
    _check_df(df1, "df1")
    _check_df(df2, "df2")
    if math.isnan(f) or f < 0:
        raise DomainError(f"F statistic must be >= 0, got {f!r}")
    if math.isinf(f):
        return 0.0
    x = df1 * f / (df1 * f + df2)
    return reg_inc_beta_complement(x, 0.5 * df1, 0.5 * df2)


def correlation_t(r: float, n: int) -> float:
    """t statistic for H0: rho = 0 given a sample correlation ``r`` over ``n`` pairs."""
    if n < 3:
        raise DomainError(f"need n >= 3 to test a correlation, got n={n}")
    if not -1.0 <= r <= 1.0:
        raise DomainError(f"correlation must lie in [-1, 1], got {r!r}")
    if abs(r) == 1.0:
        return math.copysign(math.inf, r)
    return r * math.sqrt(n - 2) / math.sqrt(1.0 - r * r)


def correlation_p(r: float, n: int) -> float:
    """Two-tailed p-value of a Pearson correlation (t test, df = n - 2)."""
    return t_two_tailed(correlation_t(r, n), n - 2)


class StatisticKind(str, enum.Enum):
    T = "t"
    F = "F"


class Decision(str, enum.Enum):
    REJECT = "RejectH0"
    FAIL_TO_REJECT = "FailToRejectH0"

    @property
    def paper_wording(self) -> str:
        return "Reject H0" if self is Decision.REJECT else "Accept H0"


@dataclass(frozen=True)
class TestVerdict:
    """Outcome of a t or F test at level ``alpha``.

    For t tests the degrees of freedom live in ``df1`` and ``df2`` is 0.
    """

    __test__ = False  # keep pytest from collecting this class

    statistic: float
    statistic_kind: StatisticKind
    df1: int
    df2: int
    p_value: float
    alpha: float
    decision: Decision
    label: str = ""

    def describe(self, paper_wording: bool = False) -> str:
        from .formatting import spss

        word = self.decision.paper_wording if paper_wording else self.decision.value
        cmp = ">" if self.alpha > self.p_value else "<="
        df = f"{self.df1}" if self.statistic_kind is StatisticKind.T else f"{self.df1}, {self.df2}"
        head = f"{self.label}: " if self.label else ""
        return (
            f"{head}{self.statistic_kind.value}({df}) = {spss(self.statistic)}, "
            f"Sig. = {spss(self.p_value)}; {spss(self.alpha)} {cmp} {spss(self.p_value)} -> {word}"
        )

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "statistic": self.statistic,
            "kind": self.statistic_kind.value,
            "df1": self.df1,
            "df2": self.df2,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "decision": self.decision.value,
        }


def verdict(
    statistic: float,
    kind,
    df1: int,
    df2: int = 0,
    alpha: float = 0.05,
    label: str = "",
) -> TestVerdict:
    """Test a t (two-tailed) or F (upper-tail) statistic at level ``alpha``.

    H0 is rejected only when p < alpha; a tie keeps H0.
    """
    kind = StatisticKind(kind)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if kind is StatisticKind.T:
        p = t_two_tailed(statistic, df1)
        df2 = 0
    else:
        p = f_sf(statistic, df1, df2)
    decision = Decision.REJECT if p < alpha else Decision.FAIL_TO_REJECT
    return TestVerdict(statistic, kind, int(df1), int(df2), p, alpha, decision, label)
