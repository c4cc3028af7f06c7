"""Matrix-variate beta generator distributions.

Zonal-polynomial series for normalizing constants, determinant moments and
entropies, with importance-sampling estimators as an independent check.
"""

from .distributions import (
    MbgParams,
    TransformParams,
    eigen_log_density,
    in_support,
    kummer,
    log_density,
    transform_density,
)
from .errors import (
    ConvergenceError,
    DensityUndefinedError,
    DomainError,
    EstimatorUnreliableError,
    MbgError,
    PoleError,
    SupportError,
)
from .families import Family
from . import series
from .generator import GeneratorH, builtin, constant_one, exp_neg, exp_pos, geometric, parse_generator, polynomial
from .montecarlo import McEstimate, is_estimate
from .partitions import Partition, enumerate_partitions, gen_pochhammer
from .series import SeriesValue, det_moment, normalizing_integral, renyi_entropy, shannon_entropy
from .zonal import SymMatrix, build_table

__version__ = "0.1.0"
