"""Spectra, zero-mode searches, and diagnostics for gain/loss-modulated
tight-binding chains.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (
    AnalysisReport,
    ApproachResult,
    CheckLine,
    ConfigError,
    ConstantIntensityMetrics,
    EventType,
    Flux,
    IntensityStats,
    LatticeGraph,
    LinearFit,
    LucasParams,
    Mode,
    NhphPairing,
    NumericalError,
    Parity,
    PhaseStats,
    PresetParams,
    PresetVariant,
    Region,
    ReproduceResult,
    SequencePair,
    SweepEvent,
    SweepOptions,
    SweepTrajectory,
    SymmetryError,
    ZeroModeResult,
    add_uniform_shift,
    alpha_from_gamma,
    analyze_mode,
    build_lieb_tail,
    build_preset,
    build_reservoir,
    build_ssh,
    build_three_site_tail,
    check_nhph,
    check_nhph_energies,
    classify_parity,
    closed_form_u,
    closed_form_v,
    constant_intensity_metrics,
    continuity_check,
    edge_amplitude_ratio,
    edge_flux,
    eigendecompose,
    eigenvalues_of,
    find_exceptional_point,
    find_zero_mode,
    graph_to_config_json,
    join,
    linear_fit,
    lucas_pair,
    lucas_params,
    mirror_reflect,
    preset_family,
    recurrence_residual,
    run_reproduce,
    sweep,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
