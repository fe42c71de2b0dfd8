"""Python bindings for levyma.

Kernel, driver and experiment specs are plain dicts with the same layout as
the JSON config files; they are serialized before crossing into C++.
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    JumpRecord,
    PreconditionError,
    filter_weights,
    eval_h0,
    eval_hz,
    q_const,
    power_sum,
    check_omega_eps,
    increments,
    power_variation,
    series_Vmz,
    limit_toy,
    frac,
    shift_law_check,
    ks_distance,
)

__all__ = [
    "ConfigError",
    "JumpRecord",
    "PreconditionError",
    "eval_g",
    "filter_weights",
    "eval_h0",
    "eval_hz",
    "q_const",
    "min_alpha_set",
    "simulate_jumps",
    "bg_index",
    "power_sum",
    "check_omega_eps",
    "simulate_path",
    "increments",
    "power_variation",
    "series_Vmz",
    "limit_regime1",
    "limit_regime1_coupled",
    "limit_regime2",
    "limit_toy",
    "frac",
    "find_subsequence",
    "shift_law_check",
    "ks_distance",
    "run_experiment",
]


def _dump(spec):
    return spec if isinstance(spec, str) else _json.dumps(spec)


def eval_g(kernel, t):
    return _core.eval_g(_dump(kernel), t)


def min_alpha_set(kernel):
    return _core.min_alpha_set(_dump(kernel))


def simulate_jumps(levy, window, stream=0):
    return _core.simulate_jumps(_dump(levy), tuple(window), stream)


def bg_index(levy):
    return _core.bg_index(_dump(levy))


def simulate_path(kernel, jumps, n, past_window=None):
    return _core.simulate_path(_dump(kernel), jumps, n, past_window)


def limit_regime1(kernel, jumps, etas, p, k, seed=0, stream=0):
    return _core.limit_regime1(_dump(kernel), jumps, list(etas), p, k, seed, stream)


def limit_regime1_coupled(kernel, jumps, n, p, k):
    return _core.limit_regime1_coupled(_dump(kernel), jumps, n, p, k)


def limit_regime2(kernel, jumps, p, k):
    return _core.limit_regime2(_dump(kernel), jumps, p, k)


def find_subsequence(thetas, etas, tolerance, n_min, n_max, max_terms=20):
    return _json.loads(
        _core.find_subsequence(list(thetas), list(etas), tolerance, n_min, n_max, max_terms)
    )


def run_experiment(config):
    """Returns (rows_csv, summary_csv, meta_dict)."""
    rows, summary, meta = _core.run_experiment(_dump(config))
    return rows, summary, _json.loads(meta)
