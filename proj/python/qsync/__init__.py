"""Python access to the qsync simulator core."""

import json

from ._core import (
    ConfigError,
    Error,
    InfeasibleError,
    IntegrationBlowup,
    NonPhysicalError,
    add_auxiliary_node,
    coupling_matrix,
    gaussian_fidelity,
    gen_scale_free,
    gen_small_world,
    log_negativity,
    partial_transpose,
    second_order_sync,
    solve_sync_conditions,
    symplectic_eigenvalues,
    trace_distance,
    window_average,
)
from ._core import simulate as _simulate


def simulate(config, seed=None, t_end=None):
    """Run a scenario from configuration text.

    Returns a dict with numpy ``columns`` keyed like the CSV header, the
    reported ``pairs``, ``nodes``, ``failure`` (or None) and the parsed
    ``summary``.
    """
    out = _simulate(config, seed, t_end)
    out["summary"] = json.loads(out["summary"])
    return out


def simulate_file(path, seed=None, t_end=None):
    with open(path, encoding="utf-8") as fh:
        return simulate(fh.read(), seed=seed, t_end=t_end)


__all__ = [
    "ConfigError",
    "Error",
    "InfeasibleError",
    "IntegrationBlowup",
    "NonPhysicalError",
    "add_auxiliary_node",
    "coupling_matrix",
    "gaussian_fidelity",
    "gen_scale_free",
    "gen_small_world",
    "log_negativity",
    "partial_transpose",
    "second_order_sync",
    "simulate",
    "simulate_file",
    "solve_sync_conditions",
    "symplectic_eigenvalues",
    "trace_distance",
    "window_average",
]
