"""Tabulate one fundamental solution over a rectangular grid as CSV."""

import csv
import itertools
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterator, List, Optional, Sequence, TextIO, Tuple

from .config import AxisSpec, RunConfig
from .exceptions import (
    ConfigValidationError,
    SingularPointError,
    UserInputError,
    singular_point_error,
)
from .fundsol import evaluate_q
from .models import DeltaVector, Point

logger = logging.getLogger(__name__)

SINGULAR_SENTINEL = "inf"
# Nodes closer to x0 than this, relative to the size of x0, are the source
SOURCE_RTOL = 1e-12


@dataclass
class ScanSummary:
    rows: int = 0
    skipped: int = 0
    singular: int = 0


def grid_nodes(axes: Sequence[AxisSpec]) -> Iterator[Point]:
    """Cartesian product of the axis nodes; the last axis varies fastest."""
    for node in itertools.product(*(axis.nodes() for axis in axes)):
        yield tuple(node)


def is_source_node(node: Point, x0: Point) -> bool:
    """True when node is x0 up to rounding in the axis arithmetic."""
    scale = max([1.0] + [abs(v) for v in x0])
    return math.dist(node, x0) <= SOURCE_RTOL * scale


def csv_header(m: int) -> List[str]:
    return [f"x{i}" for i in range(1, m + 1)] + ["q"]


def format_float(value: float) -> str:
    """Shortest representation that parses back to the same float."""
    return repr(float(value))


def write_scan(
    config: RunConfig,
    out: TextIO,
    delta: Optional[Sequence[int]] = None,
    axes: Optional[Sequence[AxisSpec]] = None,
    progress: Optional[Callable[[int], None]] = None,
) -> ScanSummary:
    """Write the CSV scan of q_k to an open text stream.

    Nodes with a singular coordinate x_j <= 0 are skipped; a node equal to x0
    up to rounding gets the value "inf".
    """
    cfg = config.problem
    d = DeltaVector(tuple(config.scan.delta if delta is None else delta))
    d.check_length(cfg.n)
    axes = list(config.scan.axes if axes is None else axes)
    if len(axes) != cfg.m:
        raise ConfigValidationError(
            f"scan needs one axis per coordinate: got {len(axes)}, m = {cfg.m}",
            config_key="scan.axes",
        )

    x0 = tuple(config.x0)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(csv_header(cfg.m))
    summary = ScanSummary()
    for node in grid_nodes(axes):
        if progress is not None:
            progress(1)
        if any(node[j] <= 0 for j in range(cfg.n)):
            summary.skipped += 1
            continue
        try:
            if is_source_node(node, x0):
                raise singular_point_error(node)
            result = evaluate_q(
                node, x0, cfg, d, config.gamma, tol=config.tolerances.series
            )
            value = format_float(result.value)
        except SingularPointError:
            value = SINGULAR_SENTINEL
            summary.singular += 1
        writer.writerow([format_float(v) for v in node] + [value])
        summary.rows += 1

    logger.debug(
        f"Scan finished: {summary.rows} rows, {summary.skipped} skipped, "
        f"{summary.singular} singular"
    )
    return summary


def scan_to_file(
    config: RunConfig,
    path: str,
    delta: Optional[Sequence[int]] = None,
    axes: Optional[Sequence[AxisSpec]] = None,
    progress: Optional[Callable[[int], None]] = None,
) -> ScanSummary:
    target = Path(path).expanduser()
    try:
        with open(target, "w", encoding="utf-8", newline="") as f:
            return write_scan(config, f, delta, axes, progress)
    except OSError as e:
        raise UserInputError(
            f"Cannot write scan output: {e}",
            error_code="SCAN_WRITE",
            input_value=str(target),
        )


def parse_axis(text: str) -> AxisSpec:
    """Parse "start:stop:count" into an AxisSpec."""
    parts = text.split(":")
    try:
        if len(parts) != 3:
            raise ValueError(text)
        return AxisSpec(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError:
        raise UserInputError(
            f"Invalid axis specification: '{text}'",
            user_guidance="Use start:stop:count, for example 0.1:2:20",
            error_code="AXIS_SPEC",
            input_value=text,
        )


def total_nodes(axes: Sequence[AxisSpec]) -> int:
    count = 1
    for axis in axes:
        count *= axis.count
    return count


def parse_vector(text: str, kind: Callable[[str], Any] = float) -> Tuple:
    """Parse a comma separated list such as "1,0.5,0.5"; an empty string gives ()."""
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(kind(part) for part in text.split(","))
    except ValueError:
        raise UserInputError(
            f"Invalid vector: '{text}'",
            user_guidance="Give comma separated numbers, for example 1,0.5,0.5",
            error_code="VECTOR_SPEC",
            input_value=text,
        )
