"""Convergence acceleration of real sequences and chain-limit extrapolation."""

from .core import (
    DEFAULT_TOL,
    AcceleratorConfig,
    Breakdown,
    DomainError,
    Entry,
    EstimateReport,
    IndexOutOfRange,
    InsufficientData,
    InvalidSpec,
    Method,
    RealSequence,
    SeqAccelError,
    SingularSystem,
    Source,
    Tableau,
    select_best,
)
from .diagnostics import (
    ConvergenceClass,
    Kind,
    ModelSequenceSpec,
    PadeApproximant,
    classify,
    decay_parameter,
    generate,
    pade,
    pade_approximant,
    ratio_test,
)
from .euler_maclaurin import (
    ZetaTailExpansion,
    bernoulli_number,
    pochhammer,
    zeta_estimate,
    zeta_tail,
)
from .fileio import IoError, ParseError, read_sequence
from .linear import aitken_delta2, aitken_iterated, epsilon_staged, epsilon_tableau, wynn_epsilon
from .logarithmic import (
    InterpolationPoints,
    bdg,
    osada,
    richardson_general,
    richardson_standard,
    rho_general,
    rho_iterated,
    rho_iterated_general,
    rho_iterated_standard,
    rho_standard,
)
from .oligomer import (
    ChainLimitReport,
    EnergyTable,
    average_energies,
    chain_limit,
    energy_differences,
    load_fixture,
)

__version__ = "0.1.0"
