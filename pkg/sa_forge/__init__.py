"""sa-forge - averaged stochastic approximation library and benchmark harness."""

__version__ = "0.1.0"
__author__ = "Stochastic Approximation Team"
__description__ = "Constant-step-size averaged SGD, online Newton and excess-risk benchmarks"
