"""Exact invariance tests via low-leak subgroups of the sign-flipping group.

Replaces Monte Carlo permutation/sign-flipping tests with deterministic
tests over deliberately chosen subgroups whose leak (the overlap between
the signal direction and its transformed images) is zero or near zero,
recovering Z-test power with a finite, exact null distribution.
"""

from .census import (
    EnumerationGuardError,
    LeakCensusReport,
    count_all_subgroups,
    enumerate_subgroups,
    gaussian_binomial,
    leak_census,
    oracle_census,
)
from .construct import (
    InfeasibleOrderError,
    greedy_near_oracle,
    iota_two_sample,
    oracle_orthogonal,
    oracle_signflip,
    two_adic_valuation,
    two_sample_oracle,
)
from .flipcore import (
    DimensionMismatchError,
    SignFlipElement,
    SignFlipSubgroup,
    compose,
    element_from_signs,
    extend,
    full_group,
    identity,
    is_subgroup,
    negation,
    span,
    subgroup_from_basis_masks,
)
from .io import (
    NosFormatError,
    format_subgroup,
    parse_subgroup,
    read_data,
    read_direction,
    read_subgroup,
    write_subgroup,
)
from .leak import (
    Direction,
    LeakSummary,
    MatrixRepresentation,
    TrivialSubgroupError,
    delta_from_matrix,
    leak_summary,
    leak_value,
    matrix_representation,
    negate_closure,
)
from .simlab import (
    SimConfig,
    SimReport,
    conjecture_probe,
    consistency_probe,
    power_curve,
    power_table,
    pvalue_variability,
    size_audit,
)
from .testkit import (
    Dataset,
    TestResult,
    full_orthogonal_test,
    mc_orthogonal_test,
    mc_signflip_test,
    mc_z_test,
    statistic,
    subgroup_test,
    t_statistic,
)

__version__ = "0.1.0"
