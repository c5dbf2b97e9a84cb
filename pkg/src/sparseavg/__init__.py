"""Numerical workbench for sparse ergodic averaging.

Submodules: sequences (sparse times), oscillation (jump/variation/
oscillation functionals), cutoffs and kernels (averaging kernels and
their correlations), expsum (exponential-sum checks), czd (discrete
Calderon-Zygmund machinery), ergodic (toy systems and censuses),
fitting and experiments (slope fits and sweep reports), cli.
"""

__version__ = "0.1.0"

from .sequences import (
    SparseSequence,
    IndicatorSeries,
    LacunaryGrid,
    ExhaustedSeriesError,
    floor_power_sequence,
    bernoulli_indicators,
    hitting_times,
    chernoff_tail,
    lacunary_grid,
)
from .oscillation import (
    OscillationFunctional,
    jump_count,
    greedy_jump_count,
    variation,
    oscillation,
    diameter,
    apply_functional,
    axiom_suite,
)
from .cutoffs import CutoffFunction, constant_cutoff, phi_alpha_cutoff
from .kernels import (
    Kernel,
    birkhoff_kernel,
    power_average_kernel,
    indicator_kernel,
    random_average_kernel,
    expected_average_kernel,
    smooth_average_kernel,
    reflect,
    convolve,
    correlate,
    fourier_sup,
    sawtooth_identity_check,
    sawtooth_identity_scan,
    fourier_pieces,
    correlation_gap,
    correlation_decompose,
    transfer_bound_check,
)
from .expsum import (
    PhaseSum,
    exp_sum_direct,
    vdc_bound,
    vdc_certify,
    two_frequency_bound_check,
    psi_expand,
    psi_tail_coefficients,
    min_sum_check,
    sigma_split,
    counting_function,
)
from .czd import (
    DyadicInterval,
    hl_maximal,
    cz_stopping,
    CZDecomposition,
    cz_split,
    weak_type_ratio,
)
from .ergodic import (
    CyclicRotation,
    IntegerShift,
    ergodic_averages,
    oscillation_census,
    transfer_compare,
)
from .fitting import AsymptoticFit, fit_slope, stability_factor, spearman_rho
from .experiments import ExperimentConfig, ExperimentReport, run_experiment
