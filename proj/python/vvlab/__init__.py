from ._core import (
    BlowUp,
    EmptyWindow,
    Error,
    Grid1D,
    InsufficientData,
    InvalidGrid,
    InvalidParams,
    MeanViolation,
    ParamSet,
    PreShockViolation,
    RegimeOverflow,
    antiderivative,
    breaking_time,
    characteristics,
    derivative,
    exact_riemann_burgers,
    fit_rate,
    godunov_solve,
    lp_distance,
    make_grid,
    regime_sequence,
    solve,
    weighted_energy,
)

__version__ = "0.1.0"
