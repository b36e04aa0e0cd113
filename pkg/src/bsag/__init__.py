"""Bayesian security aspect graphs: validation, CVSS scoring, exact
inference, scenarios, and risk ranking."""

from . import errors
from .builtin import builtin_document, builtin_model
from .cvss import CvssVector, base_score, exploit_probability, parse_vector
from .dot import export_dot
from .graph import (
    Aspect,
    AspectGraph,
    AspectKind,
    Category,
    DependencyEdge,
    EdgeKind,
    ancestors,
    category_stats,
    descendants,
    entry_points,
    topological_sort,
    validate_graph,
)
from .inference import (
    BayesNode,
    CompiledNetwork,
    MarginalReport,
    Method,
    NodeMode,
    ParentEdge,
    compile_network,
    cpt_entry,
    elimination_order,
    enumerate_oracle,
    query_marginals,
    query_posterior,
)
from .model import Model, Scenario, ScoreEntry, ScoreSource, load_model, model_from_dict, save_model
from .nvd import CvssRecord, FixtureProvider, NvdProvider, fetch_cvss
from .scenarios import (
    RiskEntry,
    VerificationReport,
    compare_scenarios,
    risk_ranking,
    run_scenario,
    verify_against_reference,
)

__version__ = "0.1.0"

__all__ = [
    "Aspect", "AspectGraph", "AspectKind", "BayesNode", "Category",
    "CompiledNetwork", "CvssRecord", "CvssVector", "DependencyEdge",
    "EdgeKind", "FixtureProvider", "MarginalReport", "Method", "Model",
    "NodeMode", "NvdProvider", "ParentEdge", "RiskEntry", "Scenario",
    "ScoreEntry", "ScoreSource", "VerificationReport", "ancestors",
    "base_score", "builtin_document", "builtin_model", "category_stats",
    "compare_scenarios", "compile_network", "cpt_entry", "descendants",
    "elimination_order", "entry_points", "enumerate_oracle", "errors",
    "exploit_probability", "export_dot", "fetch_cvss", "load_model",
    "model_from_dict", "parse_vector", "query_marginals", "query_posterior",
    "risk_ranking", "run_scenario", "save_model", "topological_sort",
    "validate_graph",
]
