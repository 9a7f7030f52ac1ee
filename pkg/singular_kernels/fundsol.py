"""Fundamental solutions q_k of the elliptic operator with n singular coefficients.

For a point x, a source x0 and a selector delta, q_k is

    gamma * prod_i (x_i x0_i)^(delta_i (1 - 2 alpha_i))
          * (r^2)^(-(alpha + A_k)) * F_A[alpha + A_k, B_k; 2 B_k; xi]

with xi_k = (r^2 - r_k^2) / r^2 <= 0. Far from the source (sum |xi| < 0.8)
F_A is evaluated by the decomposition directly, and closer in by its Laplace
integral, which holds for every xi_k <= 0.

The transformed path Pfaff-transforms every Gauss factor of the
decomposition instead, which gives

    q_k = gamma * prod(...) * r^(2-m) * prod_k r_k^(-2 B_k) * f

where f is a grid series whose Gauss factors have arguments 1 - r^2/r_k^2
in [0, 1) and stay finite as r -> 0. It converges slowly for n >= 3 and is
kept as an independent cross-check of the integral.
"""

import logging
import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import (
    DomainError,
    ParameterError,
    half_space_error,
    singular_point_error,
)
from .lauricella import fa_decomposed, fa_integral, grid_series
from .models import (
    DeltaVector,
    EvalResult,
    Geometry,
    LauricellaParams,
    Point,
    ProblemConfig,
    SolutionParams,
    as_point,
)
from .special_functions import gauss_2f1_batch, ln_gamma

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-14
DIRECT_PATH_LIMIT = 0.8
TRANSFORMED_DEGREE_CAP = {1: 0, 2: 2000, 3: 150, 4: 24, 5: 12, 6: 8}
LIMIT_DEGREE_CAP = {1: 0, 2: 4000, 3: 200, 4: 30, 5: 14, 6: 10}


class RadialExponent(str, Enum):
    """Power of r^2 multiplying F_A."""

    SHIFTED = "shifted"  # (r^2)^(-(alpha + A_k))
    DISPLAYED = "displayed"  # (r^2)^(-alpha) for every k


class EvaluationPath(str, Enum):
    AUTO = "auto"
    DIRECT = "direct"
    TRANSFORMED = "transformed"
    INTEGRAL = "integral"


def transformed_degree_cap(n: int) -> int:
    return TRANSFORMED_DEGREE_CAP.get(n, 6)


def delta_to_index(d: DeltaVector) -> int:
    """k = 1 + sum_j delta_j * 2^((n-j) delta_j)."""
    n = d.n
    return 1 + sum(
        d_j * 2 ** ((n - j) * d_j) for j, d_j in enumerate(d.delta, start=1)
    )


def index_to_delta(k: int, n: int) -> DeltaVector:
    """Inverse of delta_to_index: the n-bit binary form of k - 1."""
    if not 1 <= k <= 2**n:
        raise ParameterError(
            f"solution index k must lie in [1, {2 ** n}], got {k}",
            error_code="INDEX_RANGE",
            parameter="k",
            value=k,
        )
    return DeltaVector(tuple((k - 1) >> (n - j) & 1 for j in range(1, n + 1)))


def solution_params(
    cfg: ProblemConfig, d: DeltaVector, gamma: float = 1.0
) -> SolutionParams:
    d.check_length(cfg.n)
    shifts = [(1.0 - 2.0 * a_j) * d_j for a_j, d_j in zip(cfg.alpha, d.delta)]
    return SolutionParams(
        A=sum(shifts),
        B=tuple(a_j + s_j for a_j, s_j in zip(cfg.alpha, shifts)),
        gamma=gamma,
    )


def solution_family(
    cfg: ProblemConfig, gamma: float = 1.0
) -> List[Tuple[DeltaVector, SolutionParams]]:
    """All 2^n solutions in index order k = 1 .. 2^n."""
    family = []
    for k in range(1, 2**cfg.n + 1):
        d = index_to_delta(k, cfg.n)
        family.append((d, solution_params(cfg, d, gamma)))
    return family


def _check_point(point: Sequence[float], cfg: ProblemConfig, name: str) -> Point:
    coords = as_point(point)
    if len(coords) != cfg.m:
        raise ParameterError(
            f"{name} has {len(coords)} coordinates, expected m = {cfg.m}",
            error_code="POINT_LENGTH",
            parameter=name,
            value=len(coords),
        )
    for j in range(cfg.n):
        if not coords[j] > 0:
            raise half_space_error(j + 1, coords[j])
    return coords


def geometry(x: Sequence[float], x0: Sequence[float], cfg: ProblemConfig) -> Geometry:
    """r^2, the reflected distances r_k^2 and xi_k = 1 - r_k^2 / r^2."""
    x = _check_point(x, cfg, "x")
    x0 = _check_point(x0, cfg, "x0")
    r2 = sum((x_i - y_i) ** 2 for x_i, y_i in zip(x, x0))
    if r2 == 0:
        raise singular_point_error(x)
    # r_k^2 - r^2 = 4 x_k x0_k exactly
    rk2 = tuple(r2 + 4.0 * x[k] * x0[k] for k in range(cfg.n))
    xi = tuple(-4.0 * x[k] * x0[k] / r2 for k in range(cfg.n))
    return Geometry(r2=r2, rk2=rk2, xi=xi)


def _log_monomial(
    x: Point, x0: Point, cfg: ProblemConfig, d: DeltaVector
) -> float:
    return sum(
        d_i * (1.0 - 2.0 * a_i) * (math.log(x[i]) + math.log(x0[i]))
        for i, (a_i, d_i) in enumerate(zip(cfg.alpha, d.delta))
    )


def transformed_sum(
    a: float,
    B: Sequence[float],
    z: Sequence[float],
    tol: float = DEFAULT_TOL,
    max_degree: Optional[int] = None,
) -> EvalResult:
    """f = sum over grids of the Pfaff-transformed decomposition.

    Gauss factors are F[2B_k + M - a - N, B_k + M; 2B_k + M; z_k] with
    z_k = 1 - r^2 / r_k^2, and the grid coefficients carry (r^2/r_k^2 - 1)^M.
    """
    n = len(B)
    B_arr = np.asarray(B, dtype=float)
    if n == 1:
        value = float(
            gauss_2f1_batch(2.0 * B_arr[0] - a, B_arr[0], 2.0 * B_arr[0], z[0])
        )
        return EvalResult(value, 0.0, 1, method="transformed")

    def factor_table(k: int, m_values: np.ndarray, n_values: np.ndarray) -> np.ndarray:
        c_k = 2.0 * B_arr[k] + m_values
        return gauss_2f1_batch(c_k - a - n_values, B_arr[k] + m_values, c_k, z[k])

    cap = transformed_degree_cap(n) if max_degree is None else max_degree
    w = [-z_k for z_k in z]
    return grid_series(
        a, B_arr, 2.0 * B_arr, w, factor_table, tol, cap, "transformed"
    )


def evaluate_q(
    x: Sequence[float],
    x0: Sequence[float],
    cfg: ProblemConfig,
    d: DeltaVector,
    gamma: float = 1.0,
    tol: float = DEFAULT_TOL,
    path: EvaluationPath = EvaluationPath.AUTO,
    radial: RadialExponent = RadialExponent.SHIFTED,
    max_degree: Optional[int] = None,
) -> EvalResult:
    """Value of the fundamental solution q_k(x, x0) selected by d.

    Raises:
        SingularPointError: if x == x0
        DomainError: if a singular coordinate is not positive, if the direct
            path is forced where some |xi_k| >= 1, or if a Gauss factor of
            the transformed path is not finite
    """
    path = EvaluationPath(path)
    radial = RadialExponent(radial)
    sp = solution_params(cfg, d, gamma)
    geo = geometry(x, x0, cfg)
    x_pt, x0_pt = as_point(x), as_point(x0)
    k = delta_to_index(d)
    a = cfg.alpha_total + sp.A
    log_r2 = math.log(geo.r2)
    diagnostics = {"index": k, "r2": geo.r2, "xi": geo.xi, "radial": radial.value}

    if cfg.n == 0:
        value = gamma * math.exp(-cfg.alpha_total * log_r2)
        diagnostics["path"] = "closed-form"
        return EvalResult(value, 0.0, 1, method="closed-form", diagnostics=diagnostics)

    abs_xi = sum(abs(v) for v in geo.xi)
    if path is EvaluationPath.AUTO:
        path = (
            EvaluationPath.DIRECT
            if abs_xi < DIRECT_PATH_LIMIT
            else EvaluationPath.INTEGRAL
        )
    log_scale = _log_monomial(x_pt, x0_pt, cfg, d)
    # DISPLAYED keeps (r^2)^(-alpha); the series below carry (r^2)^(-(alpha + A))
    if radial is RadialExponent.DISPLAYED:
        log_scale += sp.A * log_r2

    params = LauricellaParams(a, sp.B, tuple(2.0 * b for b in sp.B), geo.xi)
    if path is EvaluationPath.DIRECT:
        inner = fa_decomposed(params, tol=tol, max_total_degree=max_degree)
        log_scale += -a * log_r2
    elif path is EvaluationPath.INTEGRAL:
        inner = fa_integral(params, tol=tol)
        log_scale += -a * log_r2
    else:
        z = tuple(4.0 * x_pt[j] * x0_pt[j] / geo.rk2[j] for j in range(cfg.n))
        inner = transformed_sum(a, sp.B, z, tol, max_degree)
        log_scale += (1.0 - cfg.m / 2.0) * log_r2
        log_scale -= sum(b * math.log(rk2) for b, rk2 in zip(sp.B, geo.rk2))

    scale = gamma * math.exp(log_scale)
    diagnostics.update(
        {
            "path": path.value,
            "abs_xi": abs_xi,
            "reduced_sum": inner.value,
            "degree": inner.diagnostics.get("degree", 0),
        }
    )
    logger.debug(
        "q_%d at r^2=%.6g via %s path (sum |xi| = %.4g)", k, geo.r2, path.value, abs_xi
    )
    return EvalResult(
        value=scale * inner.value,
        error_estimate=abs(scale) * inner.error_estimate,
        terms_used=inner.terms_used,
        converged=inner.converged,
        method=path.value,
        diagnostics=diagnostics,
    )


def singular_limit_constant(
    cfg: ProblemConfig, d: DeltaVector, resummed: bool = False
) -> float:
    """Limit of r^(m-2) prod r_k^(2B_k) q_k / (gamma * monomial) as r -> 0.

    The default is the Gamma product

        prod_j Gamma(2B_j) Gamma(a - B_j) / (Gamma(a)^n Gamma(B_j)),  a = alpha + A_k,

    which is the contribution of the zero grid alone. With resummed=True the
    whole grid series is summed in closed form:

        Gamma(m/2 - 1) / Gamma(a) * prod_j Gamma(2B_j) / Gamma(B_j).

    Both agree for n <= 1.

    Raises:
        DomainError: if m <= 2 or some a - B_j <= 0
    """
    if cfg.m <= 2:
        raise DomainError(
            "the limit constant needs m > 2 (the singularity is logarithmic for m = 2)",
            error_code="LIMIT_DIMENSION",
            parameter="m",
            value=cfg.m,
        )
    sp = solution_params(cfg, d)
    a = cfg.alpha_total + sp.A
    log_value = sum(ln_gamma(2.0 * b) - ln_gamma(b) for b in sp.B)
    if resummed:
        log_value += ln_gamma(cfg.m / 2.0 - 1.0) - ln_gamma(a)
    else:
        for b in sp.B:
            if not a - b > 0:
                raise DomainError(
                    f"limit constant needs a - B_j > 0, got {a - b!r}",
                    error_code="LIMIT_DOMAIN",
                    parameter="a-B",
                    value=a - b,
                )
        log_value += sum(ln_gamma(a - b) for b in sp.B) - cfg.n * ln_gamma(a)
    return math.exp(log_value)


def limit_series_value(
    cfg: ProblemConfig,
    d: DeltaVector,
    tol: float = DEFAULT_TOL,
    max_total_degree: Optional[int] = None,
) -> EvalResult:
    """The r -> 0 limit of the transformed grid series, summed term by term.

    Every Gauss factor is evaluated at argument 1 with the summation theorem,
    and every coefficient factor (r^2/r_k^2 - 1)^M tends to (-1)^M.
    """
    if cfg.m <= 2:
        raise DomainError(
            "the limit series needs m > 2",
            error_code="LIMIT_DIMENSION",
            parameter="m",
            value=cfg.m,
        )
    sp = solution_params(cfg, d)
    a = cfg.alpha_total + sp.A
    B_arr = np.asarray(sp.B, dtype=float)

    def factor_at_one(k: int, m_values: np.ndarray, n_values: np.ndarray) -> np.ndarray:
        # Gamma(C) Gamma(C-A-B) / (Gamma(C-A) Gamma(C-B)) with C - B = B_k
        c_k = 2.0 * B_arr[k] + m_values
        excess = a + n_values - B_arr[k] - m_values
        return np.exp(
            ln_gamma(c_k)
            + ln_gamma(excess)
            - ln_gamma(a + n_values)
            - ln_gamma(B_arr[k])
        )

    if cfg.n == 0:
        return EvalResult(1.0, 0.0, 1, method="limit")
    if cfg.n == 1:
        value = float(factor_at_one(0, np.array([0]), np.array([0]))[0])
        return EvalResult(value, 0.0, 1, method="limit")

    cap = (
        LIMIT_DEGREE_CAP.get(cfg.n, 8)
        if max_total_degree is None
        else max_total_degree
    )
    return grid_series(
        a, B_arr, 2.0 * B_arr, [-1.0] * cfg.n, factor_at_one, tol, cap, "limit"
    )


def limit_ratio(
    x: Sequence[float],
    x0: Sequence[float],
    cfg: ProblemConfig,
    d: DeltaVector,
    gamma: float = 1.0,
    tol: float = DEFAULT_TOL,
) -> Tuple[float, EvalResult]:
    """r^(m-2) prod r_k^(2B_k) q_k / (gamma * monomial prefactor) at x."""
    sp = solution_params(cfg, d, gamma)
    geo = geometry(x, x0, cfg)
    result = evaluate_q(x, x0, cfg, d, gamma, tol, EvaluationPath.INTEGRAL)
    log_factor = (cfg.m / 2.0 - 1.0) * math.log(geo.r2)
    log_factor += sum(b * math.log(rk2) for b, rk2 in zip(sp.B, geo.rk2))
    log_factor -= _log_monomial(as_point(x), as_point(x0), cfg, d)
    return result.value * math.exp(log_factor) / gamma, result
