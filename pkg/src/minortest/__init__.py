"""One-sided-error property testers for bounded-degree graphs.

Testers either accept or reject with a verifiable certificate (a simple
cycle, a minor witness made of branch sets, or a sparse cut), accessed only
through a query-counting incidence-list oracle.
"""

from .certificates import (
    MinorWitness,
    Pattern,
    SimpleCycle,
    SparseCut,
    Verdict,
    certificate_from_json,
    certificate_to_json,
    cycle_pattern,
    path_pattern,
    star_pattern,
    verify_certificate,
)
from .config import DEFAULT, Config
from .graphcore import (
    BudgetExhausted,
    CanonicalEdge,
    EdgeLabeling,
    Graph,
    GraphFormatError,
    LAMBDA,
    QueryOracle,
    TAU,
    canonical_edge,
)
from .errors import InstanceTooLarge, PreconditionError, SearchBudgetExceeded

__all__ = [
    "BudgetExhausted",
    "CanonicalEdge",
    "Config",
    "DEFAULT",
    "EdgeLabeling",
    "Graph",
    "GraphFormatError",
    "InstanceTooLarge",
    "LAMBDA",
    "MinorWitness",
    "Pattern",
    "PreconditionError",
    "QueryOracle",
    "SearchBudgetExceeded",
    "SimpleCycle",
    "SparseCut",
    "TAU",
    "Verdict",
    "canonical_edge",
    "certificate_from_json",
    "certificate_to_json",
    "cycle_pattern",
    "path_pattern",
    "star_pattern",
    "verify_certificate",
]
