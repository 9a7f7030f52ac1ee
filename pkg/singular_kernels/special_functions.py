"""Gamma, Pochhammer and Gauss hypergeometric functions for real arguments.

The scalar Gauss function is an in-repo power series with explicit
convergence diagnostics. Bulk tables of Gauss factors go through scipy's
ufunc up to x = 0.5; closer to the unit argument, and wherever scipy gives up,
they are computed with mpmath, whose connection formulas also cover integer
and near-integer c - a - b.
"""

import logging
import math
from typing import Iterable, List, Sequence, Tuple, Union

import mpmath
import numpy as np
from scipy import special

from .exceptions import DomainError, ParameterError, unit_disk_error
from .models import EvalResult, GaussParams, is_nonpositive_integer

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

DEFAULT_TOL = 1e-15
MAX_TERMS = 1_000_000
# Consecutive negligible terms required before the series stops
STOP_RUN = 3

PFAFF_THRESHOLD = -0.5
# Above this argument scipy's hyp2f1 loses accuracy for large or resonant parameters
SCIPY_GAUSS_LIMIT = 0.5
# Below this argument M(b, 2b; -y) is 1 - y/2 to double precision
KUMMER_SMALL = 1e-10


def ln_gamma(z: ArrayLike) -> ArrayLike:
    """Natural log of Gamma for positive real z (scalar or array).

    A positivity guard in front of scipy.special.gammaln, which would return
    inf or the log of |Gamma| for arguments outside the domain used here.

    Raises:
        DomainError: if any z <= 0 (or is NaN)
    """
    arr = np.asarray(z, dtype=float)
    if not np.all(arr > 0):
        bad = arr[~(arr > 0)].ravel()[0]
        raise DomainError(
            f"ln_gamma requires z > 0, got {float(bad)!r}",
            user_guidance="Use signed_ln_gamma for negative non-integer arguments",
            error_code="GAMMA_DOMAIN",
            parameter="z",
            value=float(bad),
        )

    result = special.gammaln(arr)
    if result.ndim == 0:
        return float(result)
    return result


def signed_ln_gamma(z: float) -> Tuple[float, int]:
    """(ln|Gamma(z)|, sign of Gamma(z)) for any real z that is not a pole."""
    if z > 0:
        return ln_gamma(z), 1
    if is_nonpositive_integer(z):
        raise DomainError(
            f"Gamma has a pole at z = {z!r}",
            error_code="GAMMA_POLE",
            parameter="z",
            value=z,
        )
    return float(special.gammaln(z)), int(special.gammasgn(z))


def pochhammer(kappa: float, nu: int) -> float:
    """Rising factorial (kappa)_nu = kappa (kappa+1) ... (kappa+nu-1)."""
    if nu < 0 or int(nu) != nu:
        raise DomainError(
            f"Pochhammer index must be a non-negative integer, got {nu!r}",
            error_code="POCHHAMMER_INDEX",
            parameter="nu",
            value=nu,
        )
    result = 1.0
    for j in range(int(nu)):
        result *= kappa + j
    return result


def pochhammer_log_table(kappa: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """log|(kappa)_j| and sign((kappa)_j) for j = 0 .. count-1.

    Once a factor kappa + j vanishes the remaining entries are log 0 = -inf
    with sign 0.
    """
    factors = kappa + np.arange(max(count - 1, 0), dtype=float)
    with np.errstate(divide="ignore"):
        logs = np.concatenate(([0.0], np.cumsum(np.log(np.abs(factors)))))
    negatives = np.concatenate(([0], np.cumsum(factors < 0)))
    zeros = np.concatenate(([0], np.cumsum(factors == 0)))
    signs = np.where(negatives % 2 == 0, 1.0, -1.0)
    signs = np.where(zeros > 0, 0.0, signs)
    return logs[:count], signs[:count]


def log_factorial_table(count: int) -> np.ndarray:
    """log(j!) for j = 0 .. count-1."""
    return np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, max(count, 1))))))[
        :count
    ]


def pfaff_transform(p: GaussParams, x: float) -> Tuple[GaussParams, float, float]:
    """Map F(a, b; c; x) to (1-x)^(-b) F(c-a, b; c; x/(x-1)).

    Returns:
        (transformed params, transformed argument, prefactor (1-x)^(-b))
    """
    if not x < 1:
        raise DomainError(
            f"Pfaff transformation requires x < 1, got {x!r}",
            error_code="PFAFF_DOMAIN",
            parameter="x",
            value=x,
        )
    return GaussParams(p.c - p.a, p.b, p.c), x / (x - 1.0), (1.0 - x) ** (-p.b)


def _terminates(p: GaussParams) -> bool:
    return is_nonpositive_integer(p.a) or is_nonpositive_integer(p.b)


def _gauss_series(
    p: GaussParams, x: float, tol: float, max_terms: int
) -> EvalResult:
    total = 1.0
    term = 1.0
    abs_sum = 1.0
    small_run = 0
    converged = False
    n = 0
    for n in range(max_terms - 1):
        term *= (p.a + n) * (p.b + n) / ((p.c + n) * (n + 1)) * x
        total += term
        abs_sum += abs(term)
        if abs(term) <= tol * abs(total):
            small_run += 1
            if small_run == STOP_RUN:
                converged = True
                break
        else:
            small_run = 0

    terms_used = n + 2
    rounding = np.finfo(float).eps * abs_sum
    if converged:
        ratio = min(abs(x), 0.999)
        error = abs(term) * ratio / (1.0 - ratio) + rounding
    else:
        error = abs(term) * terms_used + rounding
        logger.warning(
            "Gauss series for (a=%r, b=%r, c=%r) at x=%r hit the %d-term cap",
            p.a,
            p.b,
            p.c,
            x,
            max_terms,
        )

    return EvalResult(
        value=total,
        error_estimate=error,
        terms_used=terms_used,
        converged=converged,
        method="series",
        diagnostics={"argument": x},
    )


def gauss_2f1(
    p: GaussParams,
    x: float,
    tol: float = DEFAULT_TOL,
    max_terms: int = MAX_TERMS,
) -> EvalResult:
    """Gauss hypergeometric function F(a, b; c; x) for real |x| < 1.

    Sums the power series until three consecutive terms are below
    tol * |partial sum|. For x < -0.5 the Pfaff transformation maps the
    argument into (1/3, 1/2) first; terminating series are summed directly.

    Raises:
        DomainError: if |x| >= 1
        ParameterError: if tol is not positive
    """
    if not abs(x) < 1:
        raise unit_disk_error(x)
    if not tol > 0:
        raise ParameterError(
            f"tolerance must be positive, got {tol!r}",
            error_code="TOLERANCE",
            parameter="tol",
            value=tol,
        )

    if x == 0:
        return EvalResult(1.0, 0.0, 1, method="series")

    if x < PFAFF_THRESHOLD and not _terminates(p):
        q, y, prefactor = pfaff_transform(p, x)
        inner = _gauss_series(q, y, tol, max_terms)
        return EvalResult(
            value=prefactor * inner.value,
            error_estimate=abs(prefactor) * inner.error_estimate,
            terms_used=inner.terms_used,
            converged=inner.converged,
            method="series+pfaff",
            diagnostics={"argument": y, "prefactor": prefactor},
        )

    return _gauss_series(p, x, tol, max_terms)


def gauss_2f1_at_one(p: GaussParams) -> float:
    """Gauss summation: F(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b)).

    Raises:
        DomainError: unless c - a - b > 0
    """
    excess = p.c - p.a - p.b
    if not excess > 0:
        raise DomainError(
            f"F(a, b; c; 1) needs c - a - b > 0, got {excess!r}",
            error_code="GAUSS_AT_ONE",
            parameter="c-a-b",
            value=excess,
        )
    # 1/Gamma vanishes at the poles of the denominator
    if is_nonpositive_integer(p.c - p.a) or is_nonpositive_integer(p.c - p.b):
        return 0.0

    log_c, sign_c = signed_ln_gamma(p.c)
    log_e, sign_e = signed_ln_gamma(excess)
    log_ca, sign_ca = signed_ln_gamma(p.c - p.a)
    log_cb, sign_cb = signed_ln_gamma(p.c - p.b)
    sign = sign_c * sign_e * sign_ca * sign_cb
    return sign * math.exp(log_c + log_e - log_ca - log_cb)


def gauss_2f1_batch(
    a: ArrayLike, b: ArrayLike, c: ArrayLike, x: ArrayLike
) -> np.ndarray:
    """Vectorized F(a, b; c; x) for arrays of parameters and real x < 1.

    Used for whole tables of shifted Gauss factors, including arguments
    arbitrarily close to 1 where the plain power series is unusable.

    Raises:
        DomainError: if some x >= 1 or a value is not finite
    """
    x_arr = np.asarray(x, dtype=float)
    if not np.all(x_arr < 1):
        raise unit_disk_error(float(np.max(x_arr)))
    a_b, b_b, c_b, x_b = np.broadcast_arrays(
        np.asarray(a, dtype=float),
        np.asarray(b, dtype=float),
        np.asarray(c, dtype=float),
        x_arr,
    )
    shape = x_b.shape
    a_b, b_b, c_b, x_b = (v.ravel() for v in (a_b, b_b, c_b, x_b))
    values = np.array(special.hyp2f1(a_b, b_b, c_b, x_b), dtype=float)
    redo = (x_b > SCIPY_GAUSS_LIMIT) | ~np.isfinite(values)
    if np.any(redo):
        values[redo] = _mp_hyp2f1(a_b[redo], b_b[redo], c_b[redo], x_b[redo])
        logger.debug(
            "%d of %d Gauss factors computed with mpmath", redo.sum(), redo.size
        )
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.isfinite(values)))
        raise DomainError(
            f"F({a_b[bad]!r}, {b_b[bad]!r}; {c_b[bad]!r}; {x_b[bad]!r}) is not finite",
            error_code="GAUSS_NONFINITE",
            parameter="x",
            value=float(x_b[bad]),
        )
    return values.reshape(shape)


def _mp_gauss(a: float, b: float, c: float, x: float) -> float:
    try:
        return float(mpmath.hyp2f1(a, b, c, x))
    except (mpmath.libmp.NoConvergence, ZeroDivisionError):
        return math.nan


_mp_hyp2f1 = np.vectorize(_mp_gauss, otypes=[float])


def kummer_doubled(b: float, y: ArrayLike) -> ArrayLike:
    """Kummer's M(b, 2b; -y) for b > 0 and y >= 0, without overflow.

    Kummer's second theorem gives

        M(b, 2b; -y) = Gamma(b + 1/2) (y/4)^(1/2 - b) ive(b - 1/2, y/2)

    with ive the exponentially scaled modified Bessel function. For large y
    the value decays like Gamma(2b) / Gamma(b) * y^(-b).
    """
    y_arr = np.asarray(y, dtype=float)
    nu = b - 0.5
    small = y_arr < KUMMER_SMALL
    safe = np.where(small, 1.0, y_arr)
    value = (
        special.gamma(b + 0.5) * (0.25 * safe) ** (-nu) * special.ive(nu, 0.5 * safe)
    )
    value = np.where(small, 1.0 - 0.5 * y_arr, value)
    if value.ndim == 0:
        return float(value)
    return value


def richardson_limit(
    values: Sequence[float], exponents: Iterable[float], ratio: float = 2.0
) -> float:
    """Extrapolate T(h) to h -> 0 from samples on h_j = h_0 / ratio**j.

    Each exponent e eliminates one error term C h^e; the number of exponents
    used is one less than the number of samples.
    """
    table: List[float] = [float(v) for v in values]
    for e in list(exponents)[: len(table) - 1]:
        factor = ratio**e
        table = [
            (factor * table[j + 1] - table[j]) / (factor - 1.0)
            for j in range(len(table) - 1)
        ]
    return table[-1]


def at_one_exponents(excess: float, count: int) -> List[float]:
    """The first count exponents of F(x) - F(1) in powers of 1 - x.

    The expansion has integer powers 1, 2, ... and powers d, d+1, ... with
    d = c - a - b.
    """
    candidates = {float(k) for k in range(1, count + 1)}
    candidates.update(excess + k for k in range(count))
    return sorted(candidates)[:count]


def gauss_limit_at_one(
    p: GaussParams, levels: Sequence[int] = range(4, 13), tol: float = DEFAULT_TOL
) -> float:
    """Extrapolate the series value at x = 1 - 2^(-j) to x = 1."""
    samples = [gauss_2f1(p, 1.0 - 2.0 ** (-j), tol).value for j in levels]
    exponents = at_one_exponents(p.c - p.a - p.b, len(samples) - 1)
    return richardson_limit(samples, exponents)
