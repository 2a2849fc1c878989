"""Matrix-free geometric multigrid for Taylor-Hood Stokes systems."""

from ._core import (
    BenchmarkConfig,
    CycleType,
    DiagonalChoice,
    Error,
    StokesOperator,
    benchmark_names,
    benchmark_operator,
    chebyshev_polynomial,
    chebyshev_scale,
    compute_q,
    compute_T,
    eta0,
    load_config,
    run,
    sweep,
)

__all__ = [
    "BenchmarkConfig",
    "CycleType",
    "DiagonalChoice",
    "Error",
    "StokesOperator",
    "benchmark_names",
    "benchmark_operator",
    "chebyshev_polynomial",
    "chebyshev_scale",
    "compute_q",
    "compute_T",
    "eta0",
    "load_config",
    "run",
    "sweep",
]
