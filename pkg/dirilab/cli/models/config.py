"""
Experiment configuration for the dirilab CLI.

An ExperimentConfig is read from a JSON file (--config) and then overridden by
command-line flags. It is converted to the engine-side LabConfig, a schedule and
a PsiSpec before any computation starts.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from pydantic import ValidationError

from dirilab.cli.utils.errors import ConfigurationError
from dirilab.src.config import (
    DEFAULT_CONSISTENCY_TOLERANCE,
    DEFAULT_ESTIMATOR_TOLERANCE,
    DEFAULT_HOLDER_MARGIN,
    DEFAULT_LEVEL_BUDGET,
    DEFAULT_LOWER_BOUND_SLACK,
    DEFAULT_MASS_TOLERANCE,
    DEFAULT_PRECISION_BITS,
    DEFAULT_SEED,
    DEFAULT_SOLVER_TOLERANCE,
    DEFAULT_TERM_BUDGET,
    OUTPUT_BASE_DIR,
    LabConfig,
)
from dirilab.src.engine.cantor import schedule_from_dict
from dirilab.src.engine.classification import PsiSpec
from dirilab.src.engine.errors import LabError
from dirilab.src.engine.schedule import Schedule

MIN_PRECISION_BITS = 53
STEP3_MODES = ("actual", "quarter-power")


def _default_schedule() -> Dict[str, Any]:
    return {"kind": "cantor", "M": 3, "L": 2, "tau": "1", "window_blocks": [1, 2]}


def _default_psi() -> Dict[str, Any]:
    return {"family": "power", "tau": "1"}


@dataclass
class Tolerances:
    """
    Numeric tolerances with their documented defaults.

    Attributes:
        solver: Residual tolerance of the pressure root
        mass: Allowed deviation of a level's total mass from 1
        consistency: Allowed parent/children mass mismatch
        holder_margin: Slack subtracted from the Holder exponent target
        estimator: Allowed distance of a dimension estimate from S
        lower_bound_slack: Allowed excess of the mdp bound over the box count
    """

    solver: float = DEFAULT_SOLVER_TOLERANCE
    mass: float = DEFAULT_MASS_TOLERANCE
    consistency: float = DEFAULT_CONSISTENCY_TOLERANCE
    holder_margin: float = DEFAULT_HOLDER_MARGIN
    estimator: float = DEFAULT_ESTIMATOR_TOLERANCE
    lower_bound_slack: float = DEFAULT_LOWER_BOUND_SLACK

    def validate(self):
        for name, value in self.to_dict().items():
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigurationError(
                    f"tolerance {name} must be a positive number, got {value!r}"
                )

    def to_dict(self) -> dict:
        return {
            "solver": self.solver,
            "mass": self.mass,
            "consistency": self.consistency,
            "holder_margin": self.holder_margin,
            "estimator": self.estimator,
            "lower_bound_slack": self.lower_bound_slack,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Tolerances":
        unknown = set(data) - set(cls().to_dict())
        if unknown:
            raise ConfigurationError(f"unknown tolerance keys: {', '.join(sorted(unknown))}")
        try:
            return cls(**{k: float(v) for k, v in data.items()})
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"tolerances must be numbers: {e}")


@dataclass
class ExperimentConfig:
    """
    One reproducible experiment.

    Attributes:
        schedule: Schedule JSON tagged by kind ("cantor" or "general")
        psi: PsiSpec JSON ({family, tau, beta, table})
        depth: Deepest level materialized by cantor, measure, dimension and audit
        precision_bits: mpmath working precision
        tolerances: Numeric tolerances
        seed: Seed for every sampling step
        samples: Sample count for ball audits and witness checks
        level_budget: Largest level enumerated
        term_budget: Largest pressure sum evaluated
        step3: Window-level mass divisor mode ("actual" or "quarter-power")
        output_dir: Directory for output files
    """

    schedule: Dict[str, Any] = field(default_factory=_default_schedule)
    psi: Dict[str, Any] = field(default_factory=_default_psi)
    depth: int = 6
    precision_bits: int = DEFAULT_PRECISION_BITS
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = DEFAULT_SEED
    samples: int = 200
    level_budget: int = DEFAULT_LEVEL_BUDGET
    term_budget: int = DEFAULT_TERM_BUDGET
    step3: str = "actual"
    output_dir: str = OUTPUT_BASE_DIR

    def validate(self):
        """
        Validate every referenced parameter before any computation.

        Raises:
            ConfigurationError: If validation fails
        """
        for name in ("depth", "samples", "level_budget", "term_budget"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigurationError(f"seed must be an integer, got {self.seed!r}")
        if not isinstance(self.precision_bits, int) or self.precision_bits < MIN_PRECISION_BITS:
            raise ConfigurationError(
                f"precision_bits must be an integer >= {MIN_PRECISION_BITS}, "
                f"got {self.precision_bits!r}"
            )
        if self.step3 not in STEP3_MODES:
            raise ConfigurationError(f"step3 must be one of {STEP3_MODES}, got {self.step3!r}")
        self.tolerances.validate()
        self.build_schedule()
        self.build_psi()

    def build_schedule(self) -> Schedule:
        try:
            return schedule_from_dict(self.schedule)
        except KeyError as e:
            raise ConfigurationError(f"schedule is missing field {e}")
        except (LabError, TypeError, ValueError) as e:
            raise ConfigurationError(f"invalid schedule: {e}")

    def build_psi(self) -> PsiSpec:
        try:
            return PsiSpec.model_validate(
                {**self.psi, "precision_bits": self.precision_bits}
            )
        except (ValidationError, LabError) as e:
            raise ConfigurationError(f"invalid psi: {e}")

    def to_lab_config(self) -> LabConfig:
        """Engine-side settings; DIRILAB_OUTPUT_DIR still wins over output_dir."""
        return LabConfig.from_cli(
            output_dir=self.output_dir,
            precision_bits=self.precision_bits,
            solver_tolerance=self.tolerances.solver,
            mass_tolerance=self.tolerances.mass,
            consistency_tolerance=self.tolerances.consistency,
            holder_margin=self.tolerances.holder_margin,
            estimator_tolerance=self.tolerances.estimator,
            term_budget=self.term_budget,
            level_budget=self.level_budget,
            seed=self.seed,
        )

    def to_dict(self) -> dict:
        return {
            "schedule": dict(self.schedule),
            "psi": dict(self.psi),
            "depth": self.depth,
            "precision_bits": self.precision_bits,
            "tolerances": self.tolerances.to_dict(),
            "seed": self.seed,
            "samples": self.samples,
            "level_budget": self.level_budget,
            "term_budget": self.term_budget,
            "step3": self.step3,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        """
        Create ExperimentConfig from a parsed JSON object.

        Args:
            data: Configuration dictionary; missing keys take defaults

        Returns:
            ExperimentConfig instance

        Raises:
            ConfigurationError: If the object is not a mapping or has unknown keys
        """
        if not isinstance(data, dict):
            raise ConfigurationError("configuration must be a JSON object")
        defaults = cls()
        unknown = set(data) - set(defaults.to_dict())
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        tolerances = data.get("tolerances", {})
        if not isinstance(tolerances, dict):
            raise ConfigurationError("tolerances must be a JSON object")
        for name in ("schedule", "psi"):
            if name in data and not isinstance(data[name], dict):
                raise ConfigurationError(f"{name} must be a JSON object")
        return cls(
            schedule=data.get("schedule", defaults.schedule),
            psi=data.get("psi", defaults.psi),
            depth=data.get("depth", defaults.depth),
            precision_bits=data.get("precision_bits", defaults.precision_bits),
            tolerances=Tolerances.from_dict(tolerances),
            seed=data.get("seed", defaults.seed),
            samples=data.get("samples", defaults.samples),
            level_budget=data.get("level_budget", defaults.level_budget),
            term_budget=data.get("term_budget", defaults.term_budget),
            step3=data.get("step3", defaults.step3),
            output_dir=data.get("output_dir", defaults.output_dir),
        )

    def override(self, **values: Optional[Any]) -> "ExperimentConfig":
        """Apply command-line values; None leaves the config value in place."""
        for name, value in values.items():
            if value is None:
                continue
            if name in self.tolerances.to_dict():
                setattr(self.tolerances, name, value)
            elif name in ("M", "L", "tau"):
                self.schedule = {**self.schedule, name: str(value) if name == "tau" else value}
            else:
                setattr(self, name, value)
        return self
