"""Numerical laboratory for oscillation inequalities: jump counts, variation
norms, multi-frequency Fourier projections, polynomial exponential sums and
polynomial ergodic averages."""

from .errors import (
    AmbiguityError,
    DomainError,
    PrecisionError,
    QuadratureError,
    UnsupportedConfiguration,
)
from .oscillation import (
    ComplexSequence,
    ScalePartition,
    block_v2_bound,
    jump_count,
    r_variation,
    split_jump_bound,
)
from .martingale import DyadicFunction, conditional_expectation, martingale_paths
from .projections import FrequencySet, PeriodicSignal, Projector, ScaleRange
from .partitions import PHI, PSI, make_bump, whitney
from .normlab import OperatorSpec, estimate_ratio, growth_scan, interpolation_check
from .polynomial import RealPolynomial, floor_poly
from .expsums import major_arcs, multiplier_m, vdc_phi, weyl_sum
from .ergodic import CircleRotation, IntegerShift, ergodic_average
from .report import ExperimentReport

__version__ = "0.1.0"
