# SPDX-License-Identifier: Apache-2.0
"""Critical delays of linear delay-differential equations."""

from ._core import (
    CommensurateResult,
    CriticalPoint,
    DdeSystem,
    InfiniteMode,
    InputError,
    RankOneFactor,
    ScalarCriticalPoint,
    ScalarSystem,
    SingleDelayResult,
    SolverError,
    SweepConfig,
    SweepResult,
    TwoDelayPoint,
    build_heat_system,
    critical_delays_commensurate,
    eval_char_matrix,
    gu_example_parameterization,
    kron,
    load_system,
    parse_system,
    rank_one_factor,
    save_system,
    scalar_critical_delays,
    serialize_system,
    single_delay_scalar,
    smallest_singular_value,
    sweep,
    two_delay_parametrization,
    unvec,
    vec,
)

__version__ = "0.1.0"

__all__ = [
    "CommensurateResult",
    "CriticalPoint",
    "DdeSystem",
    "InfiniteMode",
    "InputError",
    "RankOneFactor",
    "ScalarCriticalPoint",
    "ScalarSystem",
    "SingleDelayResult",
    "SolverError",
    "SweepConfig",
    "SweepResult",
    "TwoDelayPoint",
    "build_heat_system",
    "critical_delays_commensurate",
    "eval_char_matrix",
    "gu_example_parameterization",
    "kron",
    "load_system",
    "parse_system",
    "rank_one_factor",
    "save_system",
    "scalar_critical_delays",
    "serialize_system",
    "single_delay_scalar",
    "smallest_singular_value",
    "sweep",
    "two_delay_parametrization",
    "unvec",
    "vec",
]
