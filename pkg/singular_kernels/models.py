"""Data models for singular-kernels."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .exceptions import ParameterError, delta_length_error, nonpositive_integer_error

Point = Tuple[float, ...]


def is_nonpositive_integer(value: float) -> bool:
    """True when value is one of 0, -1, -2, ..."""
    return value <= 0 and float(value).is_integer()


def as_point(values: Sequence[float]) -> Point:
    """Coerce a sequence of numbers into a Point tuple."""
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class GaussParams:
    """Parameters (a, b, c) of the Gauss function 2F1."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(
                    f"parameter {name} must be finite, got {value!r}",
                    error_code="NONFINITE_PARAMETER",
                    parameter=name,
                    value=value,
                )
        if is_nonpositive_integer(self.c):
            raise nonpositive_integer_error("c", self.c)


@dataclass(frozen=True)
class LauricellaParams:
    """Parameters and argument vector of the Lauricella function F_A in n variables."""

    a: float
    b: Tuple[float, ...]
    c: Tuple[float, ...]
    x: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        for name in ("b", "c", "x"):
            object.__setattr__(self, name, as_point(getattr(self, name)))

        n = len(self.x)
        if n < 1:
            raise ParameterError(
                "F_A needs at least one variable",
                error_code="EMPTY_ARGUMENT",
                parameter="x",
            )
        if len(self.b) != n or len(self.c) != n:
            raise ParameterError(
                f"b, c and x must have equal length, got "
                f"{len(self.b)}, {len(self.c)}, {n}",
                error_code="LENGTH_MISMATCH",
                parameter="b/c/x",
            )
        for i, c_i in enumerate(self.c, start=1):
            if is_nonpositive_integer(c_i):
                raise nonpositive_integer_error(f"c_{i}", c_i)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def abs_sum(self) -> float:
        return sum(abs(v) for v in self.x)


@dataclass
class EvalResult:
    """Value of a series evaluation with its diagnostics."""

    value: float
    error_estimate: float
    terms_used: int
    converged: bool = True
    method: str = ""
    diagnostics: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class MultiIndexGrid:
    """Upper-triangular array of non-negative integers m_{i,j}, 2 <= i <= j <= n.

    Values are stored in the canonical cell order (2,2), (2,3), ..., (2,n),
    (3,3), ..., (n,n).
    """

    n: int
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        expected = self.n * (self.n - 1) // 2
        if self.n < 1 or len(self.values) != expected:
            raise ParameterError(
                f"grid for n={self.n} needs {expected} entries, got {len(self.values)}",
                error_code="GRID_SHAPE",
                parameter="values",
            )
        if any(v < 0 for v in self.values):
            raise ParameterError(
                "grid entries must be non-negative",
                error_code="GRID_NEGATIVE",
                parameter="values",
            )

    @classmethod
    def from_mapping(
        cls, n: int, entries: Dict[Tuple[int, int], int]
    ) -> "MultiIndexGrid":
        """Build a grid from {(i, j): m_ij}; missing cells are zero."""
        cells = [(i, j) for i in range(2, n + 1) for j in range(i, n + 1)]
        unknown = set(entries) - set(cells)
        if unknown:
            raise ParameterError(
                f"cells outside 2 <= i <= j <= {n}: {sorted(unknown)}",
                error_code="GRID_CELL",
                parameter="entries",
            )
        return cls(n, tuple(entries.get(cell, 0) for cell in cells))

    def get(self, i: int, j: int) -> int:
        """m_{i,j}, or 0 for any cell outside the triangle."""
        if not (2 <= i <= j <= self.n):
            return 0
        # offset of row i in the canonical order
        offset = sum(self.n - r + 1 for r in range(2, i))
        return self.values[offset + (j - i)]

    @property
    def total_degree(self) -> int:
        return sum(self.values)


@dataclass(frozen=True)
class ProblemConfig:
    """Dimension m, number of singular coordinates n and the alpha vector."""

    m: int
    n: int
    alpha: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_point(self.alpha))
        if self.m < 2:
            raise ParameterError(
                f"dimension m must be at least 2, got {self.m}",
                error_code="DIMENSION",
                parameter="m",
                value=self.m,
            )
        if not 0 <= self.n <= self.m:
            raise ParameterError(
                f"n must satisfy 0 <= n <= m, got n={self.n}, m={self.m}",
                error_code="SINGULAR_COUNT",
                parameter="n",
                value=self.n,
            )
        if self.m == 2 and self.n == 0:
            raise ParameterError(
                "m = 2 with n = 0 is the logarithmic plane case",
                user_guidance="Use m >= 3, or give at least one singular coordinate",
                error_code="LOGARITHMIC_CASE",
                parameter="m",
                value=self.m,
            )
        if len(self.alpha) != self.n:
            raise ParameterError(
                f"alpha has {len(self.alpha)} entries, expected n = {self.n}",
                error_code="ALPHA_LENGTH",
                parameter="alpha",
            )
        for j, a_j in enumerate(self.alpha, start=1):
            if not 0 < a_j < 0.5:
                raise ParameterError(
                    f"alpha_{j} = {a_j!r} outside (0, 1/2)",
                    error_code="ALPHA_RANGE",
                    parameter=f"alpha_{j}",
                    value=a_j,
                )

    @property
    def alpha_total(self) -> float:
        """Sum of alpha_j minus one plus m/2."""
        return sum(self.alpha) - 1.0 + self.m / 2.0


@dataclass(frozen=True)
class DeltaVector:
    """Selector of a fundamental solution: one 0/1 flag per singular coordinate."""

    delta: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(int(d) for d in self.delta))
        if any(d not in (0, 1) for d in self.delta):
            raise ParameterError(
                f"delta entries must be 0 or 1, got {self.delta}",
                error_code="DELTA_VALUE",
                parameter="delta",
                value=self.delta,
            )

    @property
    def n(self) -> int:
        return len(self.delta)

    def check_length(self, n: int) -> None:
        if len(self.delta) != n:
            raise delta_length_error(n, len(self.delta))


@dataclass(frozen=True)
class SolutionParams:
    """Derived constants of one fundamental solution q_k."""

    A: float
    B: Tuple[float, ...]
    gamma: float


@dataclass(frozen=True)
class Geometry:
    """Squared distances to the source and its reflections, and the xi vector."""

    r2: float
    rk2: Tuple[float, ...]
    xi: Tuple[float, ...]


@dataclass(frozen=True)
class FDScheme:
    """Central finite-difference stencil: step h and order 2 or 4."""

    h: float
    order: int = 4

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ParameterError(
                f"finite-difference order must be 2 or 4, got {self.order}",
                error_code="FD_ORDER",
                parameter="order",
                value=self.order,
            )
        if not self.h > 0:
            raise ParameterError(
                f"finite-difference step must be positive, got {self.h!r}",
                error_code="FD_STEP",
                parameter="h",
                value=self.h,
            )


@dataclass
class CheckResult:
    """One named check of a verification suite.

    passed is None for checks that are reported but not asserted.
    """

    name: str
    observed: float
    threshold: Optional[float] = None
    passed: Optional[bool] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.passed is None:
            return "INFO"
        return "PASS" if self.passed else "FAIL"


@dataclass
class VerificationReport:
    """Named list of checks produced by one verification suite."""

    suite: str
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(check.passed is not False for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if check.passed is False]

    def to_dict(self) -> Dict[str, Any]:
        """Plain-data form of the report, suitable for TOML output."""
        checks = []
        for check in self.checks:
            entry: Dict[str, Any] = {
                "name": check.name,
                "status": check.status,
                "observed": check.observed,
            }
            if check.threshold is not None:
                entry["threshold"] = check.threshold
            if check.details:
                entry["details"] = dict(check.details)
            checks.append(entry)
        return {"suite": self.suite, "passed": self.passed, "checks": checks}
