"""dp1lab: a high-precision laboratory for the discrete Painleve I equation."""
from .numerics import BigReal, GammaPoly, Params
from .maps import PlaneState, dp1_forward, dp1_inverse

__all__ = ["BigReal", "GammaPoly", "Params", "PlaneState", "dp1_forward", "dp1_inverse"]
__version__ = "0.1.0"
