"""Python bindings for the afwl wave solver and its analysis kernels."""

from ._afwl import (
    DataKind,
    Grid3,
    InitialDataSpec,
    MetricFamily,
    MetricSpec,
    SimConfig,
    Trajectory,
    __version__,
    evolve,
    fit_power_law,
    flat_energy,
    kernel_integral_oracle,
    make_initial_data,
    mixed_norm,
    partition_by_l8,
    partition_count,
    run_cli,
    theorem_bound,
)

__all__ = [
    "DataKind",
    "Grid3",
    "InitialDataSpec",
    "MetricFamily",
    "MetricSpec",
    "SimConfig",
    "Trajectory",
    "__version__",
    "evolve",
    "fit_power_law",
    "flat_energy",
    "kernel_integral_oracle",
    "make_initial_data",
    "mixed_norm",
    "partition_by_l8",
    "partition_count",
    "run_cli",
    "theorem_bound",
]
