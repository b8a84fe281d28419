"""Budget-constrained contextual bandit policies and benchmark harness.

Thin wrapper over the native core. The heavy lifting (LP allocations,
policy simulation, exact DP) happens in C++; this package exposes the
operations needed to build instances, evaluate benchmarks and collect
regret estimates from Python.
"""

from ._core import (
    ConfigError,
    ContractViolation,
    Instance,
    bounds,
    dp_value,
    estimate_regret,
    het_lp,
    lp_value,
    make_instance,
    policy_ids,
    preset_names,
    preset_text,
    run_config,
    unit_lp,
    upper_bound,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "Instance",
    "bounds",
    "dp_value",
    "estimate_regret",
    "het_lp",
    "lp_value",
    "make_instance",
    "policy_ids",
    "preset_names",
    "preset_text",
    "run_config",
    "run_preset",
    "unit_lp",
    "upper_bound",
]

__version__ = "0.1.0"


def run_preset(name, runs=0, seed=None, threads=1):
    """Run a built-in preset and return the CSV result table as text."""
    text = preset_text(name)
    return run_config(
        text,
        runs=runs,
        seed=0 if seed is None else seed,
        seed_given=seed is not None,
        threads=threads,
    )
