"""Entanglement statistics of Haar-random two- and three-qubit states under quenched disorder."""

from ._haarquench import (
    SEED_SCHEDULE_VERSION,
    CleanResult,
    ConvergenceReport,
    DistributionFamily,
    EntanglementHistogram,
    ExperimentConfig,
    GmeValue,
    HaarquenchError,
    QuenchedResult,
    RngStream,
    RunDiagnostics,
    SdpStatus,
    concurrence_mixed,
    concurrence_pure,
    convergence_check,
    gme_bipartite,
    gme_monotone,
    gme_monotone_pure,
    haar_raw,
    histogram,
    inject_disorder,
    negativity,
    normalize,
    partial_transpose,
    preset,
    preset_names,
    run_clean,
    run_gamma_sweep,
    run_quenched,
    with_white_noise,
)

__all__ = [name for name in dir() if not name.startswith("_")]
