from dataclasses import dataclass
from typing import Optional
import os
from dotenv import load_dotenv

load_dotenv()

# Constants
OUTPUT_BASE_DIR = "output"
LEVELS_FILENAME = "levels.csv"
PRESSURE_FILENAME = "pressure.csv"
MEASURE_FILENAME = "measure.csv"
DIMENSION_FILENAME = "dimension.csv"
FINDINGS_FILENAME = "findings.jsonl"
SUMMARY_FILENAME = "summary.json"
PLOT_DATA_SUFFIX = ".dat"

# Numeric defaults
DEFAULT_PRECISION_BITS = 128
DEFAULT_SOLVER_TOLERANCE = 1e-10
DEFAULT_MASS_TOLERANCE = 1e-9
DEFAULT_CONSISTENCY_TOLERANCE = 1e-12
DEFAULT_HOLDER_MARGIN = 0.05
DEFAULT_ESTIMATOR_TOLERANCE = 0.15
DEFAULT_LOWER_BOUND_SLACK = 0.1
DEFAULT_TERM_BUDGET = 2_000_000
DEFAULT_LEVEL_BUDGET = 200_000
DEFAULT_SEED = 0
DEFAULT_WINDOW_BLOCK_CAP = 8

OUTPUT_DIR_ENV = "DIRILAB_OUTPUT_DIR"


@dataclass
class LabConfig:
    """Numeric settings handed to the engine by the CLI."""

    output_dir: str = OUTPUT_BASE_DIR
    precision_bits: int = DEFAULT_PRECISION_BITS
    solver_tolerance: float = DEFAULT_SOLVER_TOLERANCE
    mass_tolerance: float = DEFAULT_MASS_TOLERANCE
    consistency_tolerance: float = DEFAULT_CONSISTENCY_TOLERANCE
    holder_margin: float = DEFAULT_HOLDER_MARGIN
    estimator_tolerance: float = DEFAULT_ESTIMATOR_TOLERANCE
    term_budget: int = DEFAULT_TERM_BUDGET
    level_budget: int = DEFAULT_LEVEL_BUDGET
    seed: int = DEFAULT_SEED

    @classmethod
    def from_cli(
        cls,
        output_dir: Optional[str] = None,
        precision_bits: int = DEFAULT_PRECISION_BITS,
        solver_tolerance: float = DEFAULT_SOLVER_TOLERANCE,
        mass_tolerance: float = DEFAULT_MASS_TOLERANCE,
        consistency_tolerance: float = DEFAULT_CONSISTENCY_TOLERANCE,
        holder_margin: float = DEFAULT_HOLDER_MARGIN,
        estimator_tolerance: float = DEFAULT_ESTIMATOR_TOLERANCE,
        term_budget: int = DEFAULT_TERM_BUDGET,
        level_budget: int = DEFAULT_LEVEL_BUDGET,
        seed: int = DEFAULT_SEED,
    ) -> "LabConfig":
        """
        Create configuration for CLI context.

        The DIRILAB_OUTPUT_DIR environment variable wins over output_dir.

        Args:
            output_dir: Directory for CSV/JSON outputs
            precision_bits: mpmath working precision for masses and sums
            solver_tolerance: Pressure root residual tolerance
            mass_tolerance: Allowed deviation of a level's total mass from 1
            consistency_tolerance: Allowed parent/children mass mismatch
            holder_margin: Slack on fitted Holder slopes
            estimator_tolerance: Allowed distance between estimators and S
            term_budget: Largest pressure sum (M^L terms) evaluated
            level_budget: Largest level enumerated
            seed: Seed for every sampling step

        Returns:
            LabConfig instance
        """
        return cls(
            output_dir=os.getenv(OUTPUT_DIR_ENV) or output_dir or OUTPUT_BASE_DIR,
            precision_bits=precision_bits,
            solver_tolerance=solver_tolerance,
            mass_tolerance=mass_tolerance,
            consistency_tolerance=consistency_tolerance,
            holder_margin=holder_margin,
            estimator_tolerance=estimator_tolerance,
            term_budget=term_budget,
            level_budget=level_budget,
            seed=seed,
        )
