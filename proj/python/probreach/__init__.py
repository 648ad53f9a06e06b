"""Probabilistic reachable sets for discrete-time nonlinear stochastic systems."""

import json

from ._probreach import (
    ConfigError,
    DeviationSchedule,
    EpsilonConstants,
    NumericError,
    __version__,
    amgf,
    amgf_bound,
    amgf_quadrature_oracle,
    build_schedule,
    constant_schedule,
    epsilon_constants,
    expectation_bound,
    linear_exact_bound,
    lipschitz_radius,
    markov_bound,
    optimize_epsilon,
    preset_names,
    quantile_radius,
    reach_tube,
    simulate_deviations,
    worstcase_bound,
)
from . import _probreach


def amgf_lemma_suite(mc_samples=100000, seed=11):
    """Series/quadrature/closed-form agreement plus the Monte Carlo lemma checks, as a dict."""
    return json.loads(_probreach._amgf_lemma_suite(mc_samples, seed))


def run(subcommand, *args, out="out", **flags):
    """Runs a CLI subcommand in-process and returns the manifest.

    Keyword flags map to command-line options: ``delta=1e-3`` becomes
    ``--delta 1e-3``, ``T=15`` becomes ``--T 15``, ``full=True`` becomes ``--full``.
    """
    argv = [subcommand, *map(str, args), "--out", str(out)]
    for key, value in flags.items():
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif value is not False and value is not None:
            argv += [flag, str(value)]
    manifest = _probreach._run(argv)
    return None if manifest is None else json.loads(manifest)


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
