"""Radial density generators for elliptical distribution families.

An n-dimensional elliptical density has the form

    f(x) = c_n |Sigma|^(-1/2) g((x - mu)' Sigma^{-1} (x - mu)),

where ``g`` is the family's scalar radial profile and

    c_n = Gamma(n/2) * pi^(-n/2) / I_n,      I_n = int_0^inf z^(n/2-1) g(z) dz.

The catalog below covers six classical profiles.  For the two heavy-tailed
families (cauchy, student) the profile itself depends on the ambient dimension
``n``, so every evaluation routine takes ``n`` explicitly.

family               g(u), u >= 0                      parameters
-------------------  --------------------------------  -------------------
cauchy               (1 + u)^(-(n+1)/2)                none
exponential_power    exp(-(1/s) u^(s/2))               shape s > 1
laplace              exp(-sqrt(u))                     none
normal               exp(-u/2)                         none
student              (1 + u/m)^(-(n+m)/2)              integer dof m >= 1
logistic             e^(-u) (1 + e^(-u))^(-2)          none

The module also classifies the tail-ratio behaviour used to gate necessity
arguments in the ordering engine: for a univariate pair with scales
sigma1 != sigma2 and location shifts shift1, shift2, the limit

    C = lim_{t -> +-inf} (sigma1/sigma2) * g(t2^2) / g(t1^2),
    t_i = (t - shift_i) / sigma_i,

exists for every catalog family.  Condition A ("assumption 1") asks that C
exists in [0, inf] and differs from 1; condition B ("assumption 2") asks, for
sigma1 > sigma2, that C lies in [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DomainError, NonIntegrableError, ParameterError
from .numerics import tail_truncated_integral

__all__ = [
    "GeneratorFamily",
    "DensityGenerator",
    "LimitRatioResult",
    "eval_generator",
    "log_eval_generator",
    "radial_profile_integral",
    "normalizing_constant",
    "radial_second_moment",
    "covariance_factor",
    "limit_ratio",
    "assumption_profile",
]

#: Ladder exponents used by the numeric limit classifier: |t| = 10^k.
LADDER_EXPONENTS = (2, 3, 4, 5, 6)

#: Ratios above this value are classified as +inf, below its inverse as 0.
LADDER_DIVERGENCE = 1e12

#: Relative agreement demanded of the trailing ladder values.
LADDER_RELATIVE_TOL = 0.01


class GeneratorFamily(str, Enum):
    CAUCHY = "cauchy"
    EXPONENTIAL_POWER = "exponential_power"
    LAPLACE = "laplace"
    NORMAL = "normal"
    STUDENT = "student"
    LOGISTIC = "logistic"


@dataclass(frozen=True)
class DensityGenerator:
    """A catalog radial profile plus its family-specific parameters.

    Parameters
    ----------
    family : GeneratorFamily or str
        One of the six catalog families.
    power : float, optional
        Shape ``s`` of the exponential-power family; requires ``s > 1``.
        (The boundary case ``s = 1`` is the laplace family.)
    dof : int, optional
        Degrees of freedom ``m`` of the student family; a positive integer.
    """

    family: GeneratorFamily
    power: float | None = None
    dof: int | None = None

    def __post_init__(self) -> None:
        family = GeneratorFamily(self.family)
        object.__setattr__(self, "family", family)
        if family is GeneratorFamily.EXPONENTIAL_POWER:
            if self.power is None or not (float(self.power) > 1.0) or not math.isfinite(self.power):
                raise ParameterError("exponential_power requires a finite shape s > 1")
            object.__setattr__(self, "power", float(self.power))
        elif self.power is not None:
            raise ParameterError(f"family {family.value!r} takes no shape parameter")
        if family is GeneratorFamily.STUDENT:
            if self.dof is None or int(self.dof) != self.dof or int(self.dof) < 1:
                raise ParameterError("student requires a positive integer dof m")
            object.__setattr__(self, "dof", int(self.dof))
        elif self.dof is not None:
            raise ParameterError(f"family {family.value!r} takes no dof parameter")

    def describe(self) -> str:
        if self.family is GeneratorFamily.EXPONENTIAL_POWER:
            return f"exponential_power(s={self.power})"
        if self.family is GeneratorFamily.STUDENT:
            return f"student(m={self.dof})"
        return self.family.value


@dataclass(frozen=True)
class LimitRatioResult:
    """Outcome of the tail-ratio classification for one (sigma1, sigma2) pair.

    ``c_value`` lies in [0, inf] (math.inf encodes divergence).  The two flags
    report condition A (limit exists and differs from 1) and condition B
    (limit lies in [0, 1); only meaningful when sigma1 > sigma2, otherwise
    False).
    """

    c_value: float
    converged: bool
    satisfies_assumption1: bool
    satisfies_assumption2: bool
    sigma1: float
    sigma2: float
    method: str = "closed_form"


def _validate_dimension(n: int) -> int:
    if int(n) != n or n < 1:
        raise ParameterError("dimension n must be a positive integer")
    return int(n)


def log_eval_generator(gen: DensityGenerator, u, n: int = 1) -> np.ndarray:
    """log g_n(u) for u >= 0, vectorised over u."""
    n = _validate_dimension(n)
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("generator argument u must be nonnegative")
    fam = gen.family
    if fam is GeneratorFamily.NORMAL:
        return -0.5 * u
    if fam is GeneratorFamily.CAUCHY:
        return -0.5 * (n + 1) * np.log1p(u)
    if fam is GeneratorFamily.STUDENT:
        m = gen.dof
        return -0.5 * (n + m) * np.log1p(u / m)
    if fam is GeneratorFamily.LAPLACE:
        return -np.sqrt(u)
    if fam is GeneratorFamily.EXPONENTIAL_POWER:
        s = gen.power
        return -(u ** (s / 2.0)) / s
    if fam is GeneratorFamily.LOGISTIC:
        return -u - 2.0 * np.log1p(np.exp(-u))
    raise ParameterError(f"unknown generator family {fam!r}")


def eval_generator(gen: DensityGenerator, u, n: int = 1) -> np.ndarray:
    """g_n(u) for u >= 0, vectorised over u.  Always strictly positive."""
    return np.exp(log_eval_generator(gen, u, n))


def _radial_profile_integral_quadrature(gen: DensityGenerator, n: int) -> float:
    # Substituting z = r^2 turns int z^{n/2-1} g(z) dz into 2 int r^{n-1} g(r^2) dr,
    # which is smooth at the origin for every n >= 1.
    def integrand(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        pos = r > 0
        out[pos] = 2.0 * np.exp((n - 1) * np.log(r[pos]) + log_eval_generator(gen, r[pos] ** 2, n))
        if np.any(~pos):
            out[~pos] = 2.0 * eval_generator(gen, 0.0, n) if n == 1 else 0.0
        return out

    return tail_truncated_integral(integrand)


def radial_profile_integral(gen: DensityGenerator, n: int, method: str = "auto") -> float:
    """I_n = int_0^inf z^(n/2 - 1) g_n(z) dz.

    Closed forms exist for every family except logistic, which falls back to
    adaptive quadrature with automatic tail truncation.  ``method`` may force
    ``"closed_form"`` or ``"quadrature"`` (used for cross-validation).
    """
    n = _validate_dimension(n)
    if method not in ("auto", "closed_form", "quadrature"):
        raise ParameterError(f"unknown method {method!r}")
    if method == "quadrature":
        return _radial_profile_integral_quadrature(gen, n)
    fam = gen.family
    if fam is GeneratorFamily.NORMAL:
        return 2.0 ** (n / 2.0) * math.gamma(n / 2.0)
    if fam in (GeneratorFamily.STUDENT, GeneratorFamily.CAUCHY):
        m = gen.dof if fam is GeneratorFamily.STUDENT else 1
        log_beta = math.lgamma(n / 2.0) + math.lgamma(m / 2.0) - math.lgamma((n + m) / 2.0)
        return m ** (n / 2.0) * math.exp(log_beta)
    if fam in (GeneratorFamily.EXPONENTIAL_POWER, GeneratorFamily.LAPLACE):
        s = gen.power if fam is GeneratorFamily.EXPONENTIAL_POWER else 1.0
        return 2.0 * s ** (n / s - 1.0) * math.gamma(n / s)
    if fam is GeneratorFamily.LOGISTIC:
        if method == "closed_form":
            raise ParameterError("logistic has no closed-form radial integral")
        return _radial_profile_integral_quadrature(gen, n)
    raise ParameterError(f"unknown generator family {fam!r}")


def normalizing_constant(gen: DensityGenerator, n: int, method: str = "auto") -> float:
    """c_n = Gamma(n/2) * pi^(-n/2) / I_n, with 0 < I_n < inf enforced."""
    n = _validate_dimension(n)
    profile = radial_profile_integral(gen, n, method=method)
    if not (0.0 < profile < math.inf):
        raise NonIntegrableError(
            f"radial profile integral of {gen.describe()} in dimension {n} is not finite/positive"
        )
    return math.gamma(n / 2.0) * math.pi ** (-n / 2.0) / profile


def radial_second_moment(gen: DensityGenerator, n: int, method: str = "auto") -> float:
    """E(R^2) for the radial part R with density proportional to r^(n-1) g_n(r^2).

    Equals I_{n+2} / I_n where both integrals use the *same* profile g_n.
    Returns math.inf when the numerator diverges (cauchy for every n; student
    when m <= 2).
    """
    n = _validate_dimension(n)
    if method not in ("auto", "closed_form", "quadrature"):
        raise ParameterError(f"unknown method {method!r}")
    fam = gen.family
    if method != "quadrature":
        if fam is GeneratorFamily.NORMAL:
            return float(n)
        if fam is GeneratorFamily.CAUCHY:
            return math.inf
        if fam is GeneratorFamily.STUDENT:
            m = gen.dof
            return n * m / (m - 2.0) if m > 2 else math.inf
        if fam in (GeneratorFamily.EXPONENTIAL_POWER, GeneratorFamily.LAPLACE):
            s = gen.power if fam is GeneratorFamily.EXPONENTIAL_POWER else 1.0
            return s ** (2.0 / s) * math.exp(math.lgamma((n + 2.0) / s) - math.lgamma(n / s))
        if fam is GeneratorFamily.LOGISTIC and method == "closed_form":
            raise ParameterError("logistic has no closed-form radial second moment")

    def weighted(extra: int) -> float:
        def integrand(r: np.ndarray) -> np.ndarray:
            r = np.asarray(r, dtype=float)
            out = np.zeros_like(r)
            pos = r > 0
            out[pos] = 2.0 * np.exp(
                (n + extra - 1) * np.log(r[pos]) + log_eval_generator(gen, r[pos] ** 2, n)
            )
            if np.any(~pos) and n + extra == 1:
                out[~pos] = 2.0 * eval_generator(gen, 0.0, n)
            return out

        return tail_truncated_integral(integrand)

    if fam in (GeneratorFamily.CAUCHY, GeneratorFamily.STUDENT):
        m = 1 if fam is GeneratorFamily.CAUCHY else gen.dof
        if m <= 2:
            return math.inf
    return weighted(2) / weighted(0)


def covariance_factor(gen: DensityGenerator, n: int) -> float:
    """Scale factor between the dispersion matrix and the covariance matrix.

    For an elliptical vector with dispersion Sigma the covariance equals
    ``covariance_factor * Sigma``; the factor is E(R^2)/n (1 for normal,
    m/(m-2) for student with m > 2, inf for heavy tails).
    """
    n = _validate_dimension(n)
    second = radial_second_moment(gen, n)
    return second / n if math.isfinite(second) else math.inf


def _log_ratio_at(gen: DensityGenerator, t: float, sigma1: float, sigma2: float,
                  shift1: float, shift2: float) -> float:
    t1 = (t - shift1) / sigma1
    t2 = (t - shift2) / sigma2
    term1 = float(log_eval_generator(gen, np.array([t1 * t1]), 1)[0])
    term2 = float(log_eval_generator(gen, np.array([t2 * t2]), 1)[0])
    return math.log(sigma1 / sigma2) + term2 - term1


def _ladder_limit(gen: DensityGenerator, sigma1: float, sigma2: float,
                  shift1: float, shift2: float) -> tuple[float, bool]:
    logs = []
    for k in LADDER_EXPONENTS:
        for sign in (1.0, -1.0):
            logs.append(_log_ratio_at(gen, sign * 10.0 ** k, sigma1, sigma2, shift1, shift2))
    tail = logs[-3:]
    hi_cut = math.log(LADDER_DIVERGENCE)
    if all(v > hi_cut for v in tail):
        return math.inf, True
    if all(v < -hi_cut for v in tail):
        return 0.0, True
    if max(tail) - min(tail) <= math.log1p(LADDER_RELATIVE_TOL):
        return math.exp(sum(tail) / len(tail)), True
    return math.exp(tail[-1]), False


def limit_ratio(
    gen: DensityGenerator,
    sigma1: float,
    sigma2: float,
    shift1: float = 0.0,
    shift2: float = 0.0,
    method: str = "auto",
) -> LimitRatioResult:
    """Classify the univariate tail ratio for a pair of scales.

    Parameters
    ----------
    sigma1, sigma2 : float
        Positive scales with ``sigma1 != sigma2`` (the classification is
        vacuous for equal scales).
    shift1, shift2 : float
        Location shifts; the limit is shift-invariant and the numeric ladder
        confirms that.
    method : {"auto", "closed_form", "numeric"}
        ``auto`` uses the closed form for every catalog family; ``numeric``
        forces the log-space evaluation ladder |t| = 10^2..10^6.

    Closed forms: student/cauchy give C = (sigma2/sigma1)^m (m = 1 for
    cauchy); the superexponential families (normal, laplace,
    exponential_power, logistic) give C = 0 when sigma1 > sigma2 and
    C = +inf when sigma1 < sigma2.
    """
    sigma1 = float(sigma1)
    sigma2 = float(sigma2)
    if not (sigma1 > 0 and sigma2 > 0):
        raise ParameterError("scales must be positive")
    if sigma1 == sigma2:
        raise ParameterError("tail-ratio classification requires sigma1 != sigma2")
    if method not in ("auto", "closed_form", "numeric"):
        raise ParameterError(f"unknown method {method!r}")

    if method == "numeric":
        c, converged = _ladder_limit(gen, sigma1, sigma2, shift1, shift2)
        used = "numeric"
    else:
        fam = gen.family
        if fam in (GeneratorFamily.STUDENT, GeneratorFamily.CAUCHY):
            m = gen.dof if fam is GeneratorFamily.STUDENT else 1
            c = (sigma2 / sigma1) ** m
        else:
            c = 0.0 if sigma1 > sigma2 else math.inf
        converged = True
        used = "closed_form"

    not_one = converged and (math.isinf(c) or abs(c - 1.0) > 1e-9)
    sat1 = bool(not_one)
    sat2 = bool(sigma1 > sigma2 and converged and 0.0 <= c < 1.0 - 1e-12)
    return LimitRatioResult(
        c_value=c,
        converged=converged,
        satisfies_assumption1=sat1,
        satisfies_assumption2=sat2,
        sigma1=sigma1,
        sigma2=sigma2,
        method=used,
    )


@lru_cache(maxsize=None)
def assumption_profile(gen: DensityGenerator) -> tuple[bool, bool, tuple[LimitRatioResult, ...]]:
    """Family-level gate for the ordering engine's necessity arguments.

    Probes the tail ratio at canonical scale pairs (2, 1) and (1, 2).
    Returns (condition A holds in both orientations, condition B holds for
    sigma1 > sigma2, the probe results).
    """
    probe_hi = limit_ratio(gen, 2.0, 1.0)
    probe_lo = limit_ratio(gen, 1.0, 2.0)
    sat1 = probe_hi.satisfies_assumption1 and probe_lo.satisfies_assumption1
    sat2 = probe_hi.satisfies_assumption2
    return sat1, sat2, (probe_hi, probe_lo)
