"""Geometric infinite divisibility, renewal thinning and subordination: transforms, samplers and verifiers."""
from . import coxcheck, renewal, samplers, subordination, transforms
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "coxcheck", "renewal", "samplers", "subordination", "transforms", "__version__"]
