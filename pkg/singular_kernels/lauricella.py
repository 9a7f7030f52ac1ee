"""Lauricella F_A: direct series, decomposition into Gauss factors, recurrence.

All three evaluators truncate by total degree and stop once two consecutive
degree shells contribute at most tol * |partial sum|.

- fa_direct sums the n-fold series. The shell of degree d equals
  (a)_d / d! times a binomial convolution of the per-variable sequences
  (b_i)_m x_i^m / (c_i)_m, so no multi-index is enumerated.
- fa_decomposed sums products of n shifted Gauss factors over triangular
  grids (grid_series below, shared with the fundamental solutions).
- fa_recurrence peels one variable at a time and is used as an oracle only.

fa_integral covers the case c_k = 2 b_k with every x_k <= 0, however large
|x_k|, through the Laplace integral over products of Kummer functions.
"""

import logging
import math
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .cache import FactorCache
from .exceptions import DomainError, lauricella_domain_error
from .models import EvalResult, GaussParams, LauricellaParams
from .multiindex import cell_count, compositions, count_matrices, grid_shell
from .special_functions import (
    gauss_2f1,
    kummer_doubled,
    ln_gamma,
    log_factorial_table,
    pochhammer,
    pochhammer_log_table,
)

logger = logging.getLogger(__name__)

DEFAULT_SHELL_TOL = 1e-12
DIRECT_DEGREE_CAP = 600
# Rows evaluated per numpy pass of the grid series
BLOCK_ROWS = 4096
BLOCK_DEGREES = 64

# quad rejects relative tolerances below 50 machine epsilons
INTEGRAL_MIN_TOL = 1e-13
INTEGRAL_INTERVALS = 400
INTEGRAL_TAIL = 1e-18
# e^(-t) is below 1e-347 past t = 800
LOG_T_MAX = math.log(800.0)

FactorTable = Callable[[int, np.ndarray, np.ndarray], np.ndarray]


def default_grid_degree(n: int) -> int:
    """Default total-degree cap of the decomposition and recurrence sums."""
    return 24 if n <= 3 else 16


def _tail_estimate(previous: float, last: float) -> float:
    if previous != 0 and abs(last) < abs(previous):
        ratio = abs(last) / abs(previous)
        return abs(last) * ratio / (1.0 - ratio)
    return abs(last)


def accumulate_shells(
    shells: Iterable[Tuple[float, int]],
    tol: float,
    max_degree: int,
    method: str,
) -> EvalResult:
    """Sum degree shells in order until two consecutive ones are negligible.

    Args:
        shells: (shell sum, number of terms) for degree 0, 1, 2, ...
        tol: relative stopping tolerance
        max_degree: last degree that may be summed
        method: label copied into the result
    """
    total = 0.0
    terms = 0
    previous = 0.0
    last = 0.0
    previous_small = False
    converged = False
    degree = -1
    for degree, (value, count) in enumerate(shells):
        if not math.isfinite(value):
            logger.warning(
                "%s: non-finite shell %r at degree %d", method, value, degree
            )
            return EvalResult(
                value=total + value,
                error_estimate=math.inf,
                terms_used=terms + count,
                converged=False,
                method=method,
                diagnostics={"degree": degree, "non_finite_degree": degree},
            )
        total += value
        terms += count
        previous, last = last, value
        small = abs(value) <= tol * abs(total)
        if degree >= 1 and small and previous_small:
            converged = True
            break
        previous_small = small
        if degree >= max_degree:
            break

    rounding = np.finfo(float).eps * abs(total) * max(degree, 1)
    if converged:
        error = abs(last) + abs(previous) + rounding
    else:
        error = _tail_estimate(previous, last) + rounding
        logger.warning(
            "%s: degree cap %d reached before the shell stopping rule "
            "(last shell %.3e, sum %.3e)",
            method,
            max_degree,
            last,
            total,
        )
    return EvalResult(
        value=total,
        error_estimate=error,
        terms_used=terms,
        converged=converged,
        method=method,
        diagnostics={"degree": degree},
    )


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise DomainError(
            f"tolerance must be positive, got {tol!r}",
            error_code="TOLERANCE",
            parameter="tol",
            value=tol,
        )


def _check_each_in_disk(p: LauricellaParams) -> None:
    for k, x_k in enumerate(p.x, start=1):
        if not abs(x_k) < 1:
            raise DomainError(
                f"argument outside |x|<1: x_{k} = {x_k!r}",
                user_guidance="Each Gauss factor of the decomposition needs |x_k| < 1",
                error_code="GAUSS_DOMAIN",
                parameter=f"x_{k}",
                value=x_k,
            )


def _power_log_table(w: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """log|w^M| and sign(w^M) for M = 0 .. count-1, with 0^0 = 1."""
    degrees = np.arange(count)
    if w == 0:
        logs = np.where(degrees == 0, 0.0, -np.inf)
        signs = np.where(degrees == 0, 1.0, 0.0)
        return logs, signs
    logs = degrees * math.log(abs(w))
    signs = np.where((degrees % 2 == 1) & (w < 0), -1.0, 1.0)
    return logs, signs


def _binomial_convolve(
    left: np.ndarray, right: np.ndarray, log_fact: np.ndarray
) -> np.ndarray:
    out = np.empty_like(left)
    for d in range(len(left)):
        weights = np.exp(log_fact[d] - log_fact[: d + 1] - log_fact[d::-1])
        out[d] = np.dot(weights * left[: d + 1], right[d::-1])
    return out


def fa_direct(
    p: LauricellaParams,
    tol: float = DEFAULT_SHELL_TOL,
    max_degree: Optional[int] = None,
) -> EvalResult:
    """Sum the defining n-fold series of F_A shell by shell.

    Raises:
        DomainError: if sum |x_i| >= 1 or tol <= 0
    """
    _check_tol(tol)
    if not p.abs_sum < 1:
        raise lauricella_domain_error(p.abs_sum)
    cap = DIRECT_DEGREE_CAP if max_degree is None else max_degree
    size = cap + 1

    log_fact = log_factorial_table(size)
    product: Optional[np.ndarray] = None
    for b_i, c_i, x_i in zip(p.b, p.c, p.x):
        log_b, sign_b = pochhammer_log_table(b_i, size)
        log_c, sign_c = pochhammer_log_table(c_i, size)
        log_w, sign_w = _power_log_table(x_i, size)
        sign = sign_b * sign_c * sign_w
        with np.errstate(invalid="ignore"):
            sequence = np.where(sign == 0, 0.0, sign * np.exp(log_b - log_c + log_w))
        if product is None:
            product = sequence
        else:
            product = _binomial_convolve(product, sequence, log_fact)

    log_a, sign_a = pochhammer_log_table(p.a, size)
    with np.errstate(invalid="ignore"):
        shells = np.where(
            sign_a == 0, 0.0, sign_a * np.exp(log_a - log_fact) * product
        )

    counts = (math.comb(d + p.n - 1, p.n - 1) for d in range(size))
    result = accumulate_shells(
        zip((float(s) for s in shells), counts), tol, cap, "direct"
    )
    result.diagnostics["abs_sum"] = p.abs_sum
    return result


def _block_end(start: int, cells: int, max_degree: int) -> int:
    end = start
    rows = 0
    while end <= max_degree and end - start < BLOCK_DEGREES:
        rows += math.comb(end + cells - 1, cells - 1) if cells else int(end == 0)
        end += 1
        if rows >= BLOCK_ROWS:
            break
    return end


def _grid_shells(
    n: int,
    a: float,
    b: Sequence[float],
    c: Sequence[float],
    w: Sequence[float],
    factor_table: FactorTable,
    max_degree: int,
) -> Iterator[Tuple[float, int]]:
    m_mat, n_mat = count_matrices(n)
    cells = cell_count(n)
    size = max_degree + 1

    log_a, sign_a = pochhammer_log_table(a, size)
    log_fact = log_factorial_table(size)
    log_bcw = []
    sign_bcw = []
    for b_k, c_k, w_k in zip(b, c, w):
        log_b, sign_b = pochhammer_log_table(b_k, size)
        log_c, sign_c = pochhammer_log_table(c_k, size)
        log_w, sign_w = _power_log_table(w_k, size)
        log_bcw.append(log_b - log_c + log_w)
        sign_bcw.append(sign_b * sign_c * sign_w)

    start = 0
    while start <= max_degree:
        end = _block_end(start, cells, max_degree)
        shells = [grid_shell(n, d) for d in range(start, end)]
        counts = [s.shape[0] for s in shells]
        grids = np.concatenate(shells)
        degrees = np.repeat(np.arange(start, end), counts)
        m_counts = grids @ m_mat
        n_counts = grids @ n_mat

        log_coef = log_a[degrees] - log_fact[grids].sum(axis=1)
        sign = sign_a[degrees].copy()
        factors = np.ones(len(grids))
        for k in range(n):
            log_coef = log_coef + log_bcw[k][m_counts[:, k]]
            sign = sign * sign_bcw[k][m_counts[:, k]]
            keys = m_counts[:, k] * size + n_counts[:, k]
            unique, inverse = np.unique(keys, return_inverse=True)
            values = factor_table(k, unique // size, unique % size)
            factors = factors * values[inverse]

        # A vanishing Pochhammer or power zeroes the term whatever the factor
        with np.errstate(invalid="ignore", over="ignore"):
            terms = np.where(sign == 0, 0.0, sign * np.exp(log_coef) * factors)
        sums = np.bincount(degrees - start, weights=terms, minlength=end - start)
        for offset, count in enumerate(counts):
            yield float(sums[offset]), count
        start = end


def grid_series(
    a: float,
    b: Sequence[float],
    c: Sequence[float],
    w: Sequence[float],
    factor_table: FactorTable,
    tol: float,
    max_degree: int,
    method: str,
) -> EvalResult:
    """Sum over triangular grids of the decomposition series.

    Each grid contributes

        (a)_{N_2(n,n)} / prod m_{i,j}!  *  prod_k (b_k)_{M_k} / (c_k)_{M_k} w_k^{M_k}
        *  prod_k factor_table(k, M_k, N_k)

    where M_k = M_2(k,n) and N_k = N_2(k,n). factor_table receives arrays of
    distinct (M, N) pairs for one variable and returns the Gauss factors.
    """
    n = len(w)
    shells = _grid_shells(n, a, b, c, w, factor_table, max_degree)
    return accumulate_shells(shells, tol, max_degree, method)


def fa_decomposed(
    p: LauricellaParams,
    tol: float = DEFAULT_SHELL_TOL,
    max_total_degree: Optional[int] = None,
) -> EvalResult:
    """Evaluate F_A through the decomposition into products of Gauss functions.

    Only |x_k| < 1 is required; outside sum |x_k| < 1 the value is returned
    with diagnostics["beyond_direct_domain"] set.
    """
    _check_tol(tol)
    _check_each_in_disk(p)
    cap = default_grid_degree(p.n) if max_total_degree is None else max_total_degree
    beyond = not p.abs_sum < 1
    if beyond:
        logger.warning(
            "decomposition evaluated at sum |x| = %.6g, outside the direct-series domain",
            p.abs_sum,
        )

    if p.n == 1:
        inner = gauss_2f1(GaussParams(p.a, p.b[0], p.c[0]), p.x[0])
        inner.method = "decomposed"
        inner.diagnostics["beyond_direct_domain"] = beyond
        return inner

    cache = FactorCache()
    unconverged = []

    def gauss_factor(k: int, m: int, n: int) -> float:
        result = gauss_2f1(
            GaussParams(p.a + n, p.b[k] + m, p.c[k] + m), p.x[k]
        )
        if not result.converged:
            unconverged.append((k + 1, m, n))
        return result.value

    def factor_table(k: int, m_values: np.ndarray, n_values: np.ndarray) -> np.ndarray:
        return np.array(
            [
                cache.cached_call(
                    (k, int(m), int(n)),
                    lambda k=k, m=int(m), n=int(n): gauss_factor(k, m, n),
                )
                for m, n in zip(m_values, n_values)
            ]
        )

    result = grid_series(p.a, p.b, p.c, p.x, factor_table, tol, cap, "decomposed")
    stats = cache.get_stats()
    logger.debug("decomposition factor cache: %s", stats)
    result.diagnostics.update(
        {
            "beyond_direct_domain": beyond,
            "factor_cache": stats,
            "unconverged_factors": len(unconverged),
        }
    )
    if unconverged:
        result.converged = False
    return result


def _check_integral_params(p: LauricellaParams) -> None:
    if not p.a > 0:
        raise DomainError(
            f"the Laplace integral needs a > 0, got {p.a!r}",
            error_code="INTEGRAL_DOMAIN",
            parameter="a",
            value=p.a,
        )
    for k, (b_k, c_k, x_k) in enumerate(zip(p.b, p.c, p.x), start=1):
        if not b_k > 0 or c_k != 2.0 * b_k:
            raise DomainError(
                f"the Laplace integral needs c_{k} = 2 b_{k} > 0, "
                f"got b_{k} = {b_k!r}, c_{k} = {c_k!r}",
                error_code="INTEGRAL_DOMAIN",
                parameter=f"c_{k}",
                value=c_k,
            )
        if x_k > 0:
            raise DomainError(
                f"the Laplace integral needs x_{k} <= 0, got {x_k!r}",
                user_guidance="Use fa_direct or fa_decomposed for positive arguments",
                error_code="INTEGRAL_DOMAIN",
                parameter=f"x_{k}",
                value=x_k,
            )


def fa_integral(
    p: LauricellaParams,
    tol: float = DEFAULT_SHELL_TOL,
) -> EvalResult:
    """Evaluate F_A[a; b; 2b; x] for x_k <= 0 from its Laplace integral.

        F_A = 1/Gamma(a) int_0^inf e^(-t) t^(a-1) prod_k M(b_k, 2b_k; x_k t) dt

    The integral is taken over v = log t, where the integrand is smooth and
    decays like e^(a v) on the left and like exp(-e^v) on the right. Break
    points go at t = 1 and at t = 1/|x_k|, where M(b_k, 2b_k; x_k t) turns
    from 1 into its power-law tail.

    Raises:
        DomainError: if tol <= 0, a <= 0, some c_k != 2 b_k or some x_k > 0
    """
    _check_tol(tol)
    _check_integral_params(p)
    y = [-x_k for x_k in p.x]
    largest = max([1.0] + y)
    lower = -math.log(largest) + math.log(INTEGRAL_TAIL) / p.a
    candidates = {0.0} | {-math.log(y_k) for y_k in y if y_k > 0}
    breaks = sorted(v for v in candidates if lower < v < LOG_T_MAX)

    def integrand(v: float) -> float:
        t = math.exp(v)
        value = math.exp(p.a * v - t)
        for b_k, y_k in zip(p.b, y):
            value *= kummer_doubled(b_k, y_k * t)
        return value

    result = integrate.quad(
        integrand,
        lower,
        LOG_T_MAX,
        epsabs=0.0,
        epsrel=max(tol, INTEGRAL_MIN_TOL),
        limit=INTEGRAL_INTERVALS,
        points=breaks,
        full_output=1,
    )
    value, abserr, info = result[:3]
    converged = len(result) == 3 and math.isfinite(value)
    if not converged:
        logger.warning("integral: quadrature stopped early: %s", result[3:])
    scale = math.exp(-ln_gamma(p.a))
    return EvalResult(
        value=value * scale,
        error_estimate=abserr * scale,
        terms_used=int(info["neval"]),
        converged=converged,
        method="integral",
        diagnostics={"intervals": int(info["last"]), "log_t_range": (lower, LOG_T_MAX)},
    )


def fa_recurrence(
    p: LauricellaParams,
    tol: float = DEFAULT_SHELL_TOL,
    max_total_degree: Optional[int] = None,
) -> EvalResult:
    """Evaluate F_A by splitting off x_1 recursively down to one Gauss function.

    The total degree of all outer indices over every recursion level is
    bounded by max_total_degree, so the term set matches fa_decomposed.
    """
    _check_tol(tol)
    _check_each_in_disk(p)
    cap = default_grid_degree(p.n) if max_total_degree is None else max_total_degree
    cache = FactorCache()
    poch = lru_cache(maxsize=None)(pochhammer)

    def gauss(a: float, b: float, c: float, x: float) -> float:
        return cache.cached_call(
            (a, b, c, x), lambda: gauss_2f1(GaussParams(a, b, c), x).value
        )

    def outer_term(
        a: float,
        b: Tuple[float, ...],
        c: Tuple[float, ...],
        x: Tuple[float, ...],
        m: Sequence[int],
        budget: int,
    ) -> float:
        s = int(sum(m))
        coef = poch(a, s) * poch(b[0], s) / poch(c[0], s) * x[0] ** s
        for b_j, c_j, x_j, m_j in zip(b[1:], c[1:], x[1:], m):
            coef *= (
                poch(b_j, int(m_j))
                / (poch(c_j, int(m_j)) * math.factorial(int(m_j)))
                * x_j ** int(m_j)
            )
        if coef == 0:
            return 0.0
        inner_b = tuple(b_j + m_j for b_j, m_j in zip(b[1:], m))
        inner_c = tuple(c_j + m_j for c_j, m_j in zip(c[1:], m))
        return (
            coef
            * gauss(a + s, b[0] + s, c[0] + s, x[0])
            * recurse(a + s, inner_b, inner_c, x[1:], budget - s)
        )

    def recurse(a, b, c, x, budget) -> float:
        if len(x) == 1:
            return gauss(a, b[0], c[0], x[0])
        total = 0.0
        for s in range(budget + 1):
            for m in compositions(s, len(x) - 1):
                total += outer_term(a, b, c, x, m, budget)
        return total

    def top_shells() -> Iterator[Tuple[float, int]]:
        for s in range(cap + 1):
            shell = 0.0
            shell_terms = 0
            for m in compositions(s, p.n - 1):
                shell += outer_term(p.a, p.b, p.c, p.x, m, cap)
                shell_terms += 1
            yield shell, shell_terms

    if p.n == 1:
        value = gauss(p.a, p.b[0], p.c[0], p.x[0])
        return EvalResult(value, 0.0, 1, method="recurrence")

    result = accumulate_shells(top_shells(), tol, cap, "recurrence")
    result.diagnostics["factor_cache"] = cache.get_stats()
    return result


def relative_difference(value: float, reference: float) -> float:
    """|value - reference| / |reference|, or |value - reference| when reference is 0."""
    scale = abs(reference)
    diff = abs(value - reference)
    return diff / scale if scale > 0 else diff


def compare_methods(
    p: LauricellaParams,
    tol: float = DEFAULT_SHELL_TOL,
    max_total_degree: Optional[int] = None,
) -> Tuple[Dict[str, EvalResult], Dict[str, float]]:
    """Evaluate F_A by all three methods.

    Returns:
        (method -> result, pair label -> relative difference against direct)
    """
    results = {
        "direct": fa_direct(p, tol),
        "decomposed": fa_decomposed(p, tol, max_total_degree),
        "recurrence": fa_recurrence(p, tol, max_total_degree),
    }
    reference = results["direct"].value
    differences = {
        "decomposed-direct": relative_difference(
            results["decomposed"].value, reference
        ),
        "recurrence-direct": relative_difference(
            results["recurrence"].value, reference
        ),
        "recurrence-decomposed": relative_difference(
            results["recurrence"].value, results["decomposed"].value
        ),
    }
    return results, differences
