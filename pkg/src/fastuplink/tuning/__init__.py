"""Age-weight tuning: cost minimization and the regret/age achievable region."""

from .beta_search import (
    BetaEvaluation,
    BetaSearchConfig,
    BetaSearchResult,
    achievable_region,
    evaluate_beta,
    optimize_beta,
    replications,
)

__all__ = [
    "BetaEvaluation",
    "BetaSearchConfig",
    "BetaSearchResult",
    "achievable_region",
    "evaluate_beta",
    "optimize_beta",
    "replications",
]
