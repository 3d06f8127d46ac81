"""Stochastic collision model for the open XXZ chain.

Thin wrapper over the compiled ``_core`` module. Arrays are NumPy; state
indices follow ascending bit-mask order with site 0 as the least significant bit.
"""

from ._core import (
    DensityMatrix,
    EnsembleConfig,
    EnsembleSeries,
    Hamiltonian,
    NoiseConfig,
    ObservableRecord,
    SectorBasis,
    Spectrum,
    TrajectoryConfig,
    TrajectoryResult,
    WeibullParams,
    __version__,
    apply_collision,
    build_hamiltonian,
    build_sector,
    collision_rate,
    compare_runs,
    execute,
    fft_difference_spectrum,
    initial_state,
    ipr,
    ier,
    local_magnetization,
    params_for_rate,
    propagate,
    run_ensemble,
    run_trajectory,
    sigma_z_diagonal,
    validate_spec,
    weibull_quantile,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
