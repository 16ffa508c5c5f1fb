"""Finite braces and module braces over Galois rings."""

from .brace_core import Brace, GammaFunction, verify_gamma
from .galois_ring import GaloisRingSpec, construct_galois_ring
from .module_core import FiniteModule, ModuleMap, ModuleShape
from .radical_ring import NilpotentRing

__all__ = [
    "Brace", "FiniteModule", "GaloisRingSpec", "GammaFunction", "ModuleMap", "ModuleShape",
    "NilpotentRing", "construct_galois_ring", "verify_gamma",
]
