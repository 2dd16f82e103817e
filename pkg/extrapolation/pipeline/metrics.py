from dataclasses import dataclass


@dataclass
class MethodMetrics:
    """Mean scores of one method on one validation setting."""
    method: str
    setting: str
    xi_rmse: float = None
    coeff_rmse: float = None
    omega_rmse: float = None
    kappa: float = None
    wall_time_s: float = 0.0
