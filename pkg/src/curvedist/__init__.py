"""curvedist: approximate parametrization of eps-rational plane algebraic
curves and empirical upper bounds on the distance between the input curve and
its rational approximation."""

from curvedist._kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
