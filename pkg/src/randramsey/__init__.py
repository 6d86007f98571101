"""Exact and Monte Carlo tools around a quantitative random Ramsey theorem."""

from .arrowing import (
    ArrowReport, SearchBudgetExceeded, arrows, arrows_lambda, color_rich_graph, min_mono_copies,
    mono_copies, rich_pairs, robust_min_mono,
)
from .audit import AuditCheck, AuditReport, audit
from .constants import (
    ChainViolationError, PreconditionError, base_case_bound, closed_forms, fkg_bound,
    folkman_bound, janson_delta_bar, ledger, prop_del_bound, prop_upper_bound, step_constants,
    two_round_split,
)
from .dense import (
    CanonicalSequence, DenseParams, canonical_lower_bound, count_canonical, extract_mono_clique,
    gamma_bound, is_rho_d_dense,
)
from .exact import ExactScalar, ExpValue
from .graphs import (
    EdgeColoring, Graph, GraphParseError, Pattern, count_copies, expected_copies,
    is_admissible, max_density_mF, named_graph, parse_graph,
)
from .random_model import (
    CreatureSet, McEstimate, Seed, count_creatures, creature_expectation_bound, deletion_oracle,
    enumerate_double_creatures, mc_arrow_probability, mc_threshold_sweep, sample_gnp,
    two_round_sample,
)

__version__ = "0.1.0"
