"""Heavy-tailed moving averages and their stable functional limits."""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    EstimationError,
    NumericError,
    ResolutionError,
    StepPath,
    TailSpec,
    check_sandwich,
    d_m2,
    d_uniform,
    drift_b,
    ks_two_sample,
    levy_exponent,
    normalizer_a,
    read_csv,
    sample_innovations,
    sample_stable,
    tail_prob,
    truncated_moment,
    write_csv,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "EstimationError",
    "NumericError",
    "ResolutionError",
    "StepPath",
    "TailSpec",
    "check_sandwich",
    "d_m2",
    "d_uniform",
    "drift_b",
    "ks_two_sample",
    "levy_exponent",
    "normalizer_a",
    "read_csv",
    "sample_innovations",
    "sample_stable",
    "tail_prob",
    "truncated_moment",
    "write_csv",
    "simulate_path",
    "run_fclt",
    "run_metric_gap",
    "run_appendix",
    "run_check_coeffs",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def simulate_path(config, n, replication=0):
    """One partial-sum path V_n for a configuration dict."""
    return _core.simulate_path(_text(config), n, replication)


def run_fclt(config, workers=1):
    return _json.loads(_core.run_fclt(_text(config), workers))


def run_metric_gap(config, workers=1):
    return _json.loads(_core.run_metric_gap(_text(config), workers))


def run_appendix(spec, n_grid=(1e10, 1e20, 1e30)):
    return _json.loads(_core.run_appendix(spec, list(n_grid)))


def run_check_coeffs(config):
    return _json.loads(_core.run_check_coeffs(_text(config)))
