"""Donor-spin spectroscopy and coherence forward model."""

from ._core import (  # noqa: F401
    SpinSystem,
    Transition,
    __version__,
    charge_noise_t2,
    dd_scaling,
    effective_gamma,
    effective_noise,
    eigenvalues,
    find_clock_transition,
    flip_flop_limit,
    id_rate,
    level_labels,
    low_field_frequency,
    meissner_noise_vs_depth,
    run_subcommand,
    shift_from_field,
    shift_from_strain,
    surface_noise_vs_depth,
    thermal_scaling,
    transitions,
)
