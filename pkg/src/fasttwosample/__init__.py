"""Linear-time nonparametric two-sample tests.

The mean-embedding (ME) and smooth characteristic function (SCF) tests
compare two samples through feature differences at a few random locations
and a Hotelling statistic with a chi-squared null. MMD baselines, data
generators, length-scale tuning and a benchmark harness are included.
"""

from .analytic_tests import TestOutcome, run_analytic_test
from .core import draw_frequencies, mix, rng
from .errors import DataError, DomainError, SingularMatrixError
from .features import FeatureKind
from .mmd_tests import block_mmd_test, mmd2_unbiased, permutation_mmd_test, subsampled_mmd_test
from .tuning import ScalingGrid, select_scaling

__version__ = "0.1.0"
