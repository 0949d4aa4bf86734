"""Dual-robot rope manipulation: planning, shape estimation and simulation."""

from ._dualrope import (
    ConfigError,
    DomainError,
    InfeasibleError,
    NoPassError,
    NumericError,
    RopeSpec,
    ScenarioConfig,
    ablate,
    arc_length,
    arc_length_general,
    endpoint_tension,
    estimate_shape,
    load_config,
    parse_config,
    plan,
    rope_ground_truth,
    run_cli,
    sag,
    simulate,
    solve_curvature_for_length,
    solve_span_for_length,
    version,
)

__version__ = version()

__all__ = [
    "ConfigError",
    "DomainError",
    "InfeasibleError",
    "NoPassError",
    "NumericError",
    "RopeSpec",
    "ScenarioConfig",
    "ablate",
    "arc_length",
    "arc_length_general",
    "endpoint_tension",
    "estimate_shape",
    "load_config",
    "parse_config",
    "plan",
    "rope_ground_truth",
    "run_cli",
    "sag",
    "simulate",
    "solve_curvature_for_length",
    "solve_span_for_length",
    "version",
]
