"""Entropy-weighted financial competitiveness scoring."""

__version__ = "0.1.0"

from .density import (  # noqa: E402
    BandwidthPolicy,
    CdfEstimate,
    EntropyMethod,
    EntropyValue,
    column_entropy,
    continuous_entropy,
    discrete_entropy,
    estimate_cdf,
)
from .indicators import (  # noqa: E402
    Category,
    CompanyRecord,
    Direction,
    IndicatorMatrix,
    IndicatorRegistry,
    IndicatorSpec,
    MissingPolicy,
    ValidatedMatrix,
    default_registry,
    validate_matrix,
)
from .normalization import (  # noqa: E402
    InverseMode,
    NormalizedMatrix,
    normalize_inverse,
    normalize_matrix,
    normalize_positive,
)
from .stats import CorrelationMatrix, DescriptiveStats, describe, pearson_matrix  # noqa: E402
from .weighting import (  # noqa: E402
    ScoreBoard,
    WeightRule,
    WeightVector,
    compute_weights,
    rank_table,
    score_companies,
)
