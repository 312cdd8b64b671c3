from ._kirchlab import (
    constants,
    fit_decay_rate,
    solve_hyperbolic,
    solve_parabolic,
    theta_shape,
)

__all__ = [
    "constants",
    "fit_decay_rate",
    "solve_hyperbolic",
    "solve_parabolic",
    "theta_shape",
]
