"""Temperatures, entropy and maximal-entropy measures for matrix-presented shifts.

The package computes, at desk scale: Perron-Frobenius data of nonnegative
matrices, topological entropy of one-sided subshifts in four presentations,
past-equivalence cover dimensions with the sofic criterion and the entropy
bracket, KMS inverse temperatures of the trace-space shift operators, and the
Parry measure with a numerical variational check.
"""

__version__ = "0.1.0"

from .beta import BetaExpansion, UncertainDigitError, beta_expansion_of_one
from .equilibrium import (
    InvariantViolation,
    MarkovMeasure,
    ResolventVector,
    VariationalReport,
    cylinder,
    cylinder_eigen,
    markov_entropy,
    parry_measure,
    resolvent_vector,
    variational_scan,
)
from .krieger import (
    BracketReport,
    DimQ,
    PastPartition,
    SoficReport,
    dim_q,
    entropy_bracket,
    omega_l,
    predecessor_set,
    sofic_check,
)
from .spectral import (
    ComponentPerron,
    ConvergenceError,
    PerronData,
    ReducibleMatrixError,
    aperiodic,
    column_sum_powers,
    component_perron_data,
    irreducible,
    period,
    perron_vectors,
    spectral_radius,
    spectral_radius_bracket_sequences,
    strongly_connected_components,
)
from .subshift import (
    SFT,
    Automaton,
    BetaShift,
    EntropyEstimate,
    ForbiddenWords,
    FullShift,
    admissible,
    count_words,
    count_words_sequence,
    sft_entropy_exact,
    topological_entropy,
)
from .tracespace import (
    BimoduleKms,
    CoherentSequence,
    EpsilonSequence,
    KmsReport,
    TemperatureSign,
    bimodule_kms,
    coherent_from_boundary,
    coherent_sequence,
    coherent_truncation,
    epsilon_sequence,
    h_iterate,
    k_iterate,
    kms_eigen_sequence,
    kms_temperature,
    normalization_profile,
    s_prime,
    t_prime,
    temperature_from_trace,
    temperature_sign,
)
