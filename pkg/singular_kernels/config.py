"""Run configuration for singular-kernels and its TOML persistence."""

import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import toml

from .exceptions import ConfigError, ConfigValidationError, KernelError
from .models import DeltaVector, Point, ProblemConfig, as_point

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("table", "toml")


@dataclass
class ToleranceConfig:
    """Stopping tolerances of the series evaluations."""

    series: float = 1e-14
    shell: float = 1e-12
    gauss: float = 1e-15


@dataclass
class AxisSpec:
    """Equally spaced nodes start, ..., stop (count of them) along one axis."""

    start: float
    stop: float
    count: int

    def nodes(self) -> List[float]:
        if self.count == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.count - 1)
        return [self.start + i * step for i in range(self.count)]


@dataclass
class ScanConfig:
    """Field scan: which q_k and one AxisSpec per coordinate."""

    delta: Tuple[int, ...] = ()
    axes: List[AxisSpec] = field(default_factory=list)


@dataclass
class VerificationConfig:
    """Sizes, seeds and finite-difference settings of the verification suites."""

    points: int = 20
    seed: int = 0
    random_sets: int = 25
    gauss_sets: int = 500
    h_factor: float = 1e-3
    fd_order: int = 4


@dataclass
class OutputConfig:
    format: str = "table"
    report: str = ""


@dataclass
class RunConfig:
    """Everything a CLI run needs besides the command-line arguments."""

    problem: ProblemConfig
    x0: Point
    gamma: float = 1.0
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    verification: VerificationConfig = field(default_factory=VerificationConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


def default_config() -> RunConfig:
    """m = 3, n = 1, alpha = (0.25,), x0 = (1, 0.5, 0.5), gamma = 1."""
    return RunConfig(
        problem=ProblemConfig(m=3, n=1, alpha=(0.25,)),
        x0=(1.0, 0.5, 0.5),
        scan=ScanConfig(
            delta=(0,),
            axes=[
                AxisSpec(0.25, 2.0, 8),
                AxisSpec(-0.5, 1.5, 8),
                AxisSpec(-0.5, 1.5, 8),
            ],
        ),
    )


class ConfigManager:
    """Loads, validates and writes RunConfig files.

    Path resolution: an explicit path, else the SINGULAR_KERNELS_CONFIG
    environment variable, else the built-in defaults.
    """

    ENV_CONFIG_PATH = "SINGULAR_KERNELS_CONFIG"

    def __init__(self, config_path: Optional[str] = None):
        self._config_path = config_path

    def resolve_path(self, path: Optional[str] = None) -> Optional[Path]:
        """The config file to read, or None for the built-in defaults."""
        chosen = path or self._config_path or os.getenv(self.ENV_CONFIG_PATH)
        return Path(chosen).expanduser() if chosen else None

    def load(self, path: Optional[str] = None) -> RunConfig:
        """Read and validate a config file; defaults when no path resolves."""
        config_file = self.resolve_path(path)
        if config_file is None:
            logger.debug("No config file given, using defaults")
            return default_config()

        if not config_file.exists():
            raise ConfigError(
                f"Configuration file not found: {config_file}",
                user_guidance="Write one with --dump-config PATH and edit it",
                error_code="CONFIG_NOT_FOUND",
                config_file=str(config_file),
            )

        try:
            with open(config_file, encoding="utf-8") as f:
                data = toml.load(f)
        except toml.TomlDecodeError as e:
            raise ConfigError(
                f"Failed to parse configuration: {e}",
                error_code="CONFIG_PARSE",
                config_file=str(config_file),
            )
        except OSError as e:
            raise ConfigError(
                f"Failed to read configuration: {e}",
                error_code="CONFIG_READ",
                config_file=str(config_file),
            )

        config = self.from_dict(data, str(config_file))
        self.validate(config)
        logger.debug(f"Loaded configuration from {config_file}")
        return config

    def save(self, config: RunConfig, path: str) -> None:
        """Validate and write config as TOML."""
        self.validate(config)
        target = Path(path).expanduser()
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            with open(target, "w", encoding="utf-8", newline="\n") as f:
                f.write(self.dumps(config))
        except OSError as e:
            raise ConfigError(
                f"Failed to save configuration: {e}",
                error_code="CONFIG_WRITE",
                config_file=str(target),
            )

    def dumps(self, config: RunConfig) -> str:
        # toml writes floats with repr, so save -> load is exact
        return toml.dumps(self.to_dict(config))

    @staticmethod
    def to_dict(config: RunConfig) -> Dict[str, Any]:
        return {
            "problem": {
                "m": config.problem.m,
                "n": config.problem.n,
                "alpha": list(config.problem.alpha),
            },
            "source": {"x0": list(config.x0), "gamma": config.gamma},
            "tolerances": asdict(config.tolerances),
            "scan": {
                "delta": list(config.scan.delta),
                "axes": [asdict(axis) for axis in config.scan.axes],
            },
            "verification": asdict(config.verification),
            "output": asdict(config.output),
        }

    @staticmethod
    def from_dict(data: Dict[str, Any], source: str = "<dict>") -> RunConfig:
        """Build a RunConfig from parsed TOML; missing sections take defaults."""
        try:
            problem = data["problem"]
            cfg = ProblemConfig(
                m=int(problem["m"]),
                n=int(problem["n"]),
                alpha=tuple(float(a) for a in problem.get("alpha", [])),
            )
            source_section = data["source"]
            scan = data.get("scan", {})
            return RunConfig(
                problem=cfg,
                x0=as_point(source_section["x0"]),
                gamma=float(source_section.get("gamma", 1.0)),
                tolerances=ToleranceConfig(
                    **{k: float(v) for k, v in data.get("tolerances", {}).items()}
                ),
                scan=ScanConfig(
                    delta=tuple(int(d) for d in scan.get("delta", [0] * cfg.n)),
                    axes=[
                        AxisSpec(float(a["start"]), float(a["stop"]), int(a["count"]))
                        for a in scan.get("axes", [])
                    ],
                ),
                verification=VerificationConfig(**data.get("verification", {})),
                output=OutputConfig(**data.get("output", {})),
            )
        except KeyError as e:
            raise ConfigValidationError(
                f"Missing configuration key: {e}",
                error_code="CONFIG_MISSING_KEY",
                config_file=source,
                config_key=str(e).strip("'"),
            )
        except TypeError as e:
            raise ConfigValidationError(
                f"Unknown or malformed configuration entry: {e}",
                error_code="CONFIG_MALFORMED",
                config_file=source,
            )
        except KernelError as e:
            raise ConfigValidationError(
                f"Invalid problem definition: {e.message}",
                user_guidance=e.user_guidance,
                error_code="CONFIG_PROBLEM",
                config_file=source,
                config_key="problem",
            )

    def validate(self, config: RunConfig) -> None:
        """Cross-field checks that the dataclasses cannot make on their own."""
        self._validate_source(config)
        self._validate_tolerances(config.tolerances)
        self._validate_scan(config)
        self._validate_verification(config.verification)
        self._validate_output(config.output)

    def _validate_source(self, config: RunConfig) -> None:
        cfg = config.problem
        if len(config.x0) != cfg.m:
            raise ConfigValidationError(
                f"x0 has {len(config.x0)} coordinates, expected m = {cfg.m}",
                config_key="source.x0",
            )
        for j in range(cfg.n):
            if not config.x0[j] > 0:
                raise ConfigValidationError(
                    f"x0_{j + 1} = {config.x0[j]!r} must be positive",
                    user_guidance="The first n coordinates of the source lie in x_j > 0",
                    config_key="source.x0",
                )

    def _validate_tolerances(self, tolerances: ToleranceConfig) -> None:
        for name, value in asdict(tolerances).items():
            if not value > 0:
                raise ConfigValidationError(
                    f"Tolerance {name} must be positive, got {value!r}",
                    config_key=f"tolerances.{name}",
                )

    def _validate_scan(self, config: RunConfig) -> None:
        scan = config.scan
        try:
            DeltaVector(scan.delta).check_length(config.problem.n)
        except KernelError as e:
            raise ConfigValidationError(e.message, config_key="scan.delta")
        if scan.axes and len(scan.axes) != config.problem.m:
            raise ConfigValidationError(
                f"scan has {len(scan.axes)} axes, expected m = {config.problem.m}",
                config_key="scan.axes",
            )
        for i, axis in enumerate(scan.axes, start=1):
            if axis.count < 1:
                raise ConfigValidationError(
                    f"axis {i} needs at least one node, got count = {axis.count}",
                    config_key="scan.axes",
                )

    def _validate_verification(self, verification: VerificationConfig) -> None:
        for name in ("points", "random_sets", "gauss_sets"):
            value = getattr(verification, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigValidationError(
                    f"verification.{name} must be a positive integer, got {value!r}",
                    config_key=f"verification.{name}",
                )
        if not verification.h_factor > 0:
            raise ConfigValidationError(
                "verification.h_factor must be positive",
                config_key="verification.h_factor",
            )
        if verification.fd_order not in (2, 4):
            raise ConfigValidationError(
                f"verification.fd_order must be 2 or 4, got {verification.fd_order!r}",
                config_key="verification.fd_order",
            )

    def _validate_output(self, output: OutputConfig) -> None:
        if output.format not in OUTPUT_FORMATS:
            raise ConfigValidationError(
                f"output.format must be one of {OUTPUT_FORMATS}, got: {output.format}",
                config_key="output.format",
            )
