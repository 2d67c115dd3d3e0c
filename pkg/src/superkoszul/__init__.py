"""Exact-arithmetic Z-graded super homological algebra.

Subpackages cover: the graded sign calculus (degrees), presented
superalgebras with bounded-degree normal forms (algebra), finite Lie
superalgebras (liealg), windowed multigraded complexes (complexes),
Chevalley-Eilenberg complexes (ce), Rees/cobar Koszul-duality constructions
(koszul), super differential operators (diffops), and the end-to-end
sl(1,1) localization computation (sl11).  The ``superkoszul`` CLI drives
the check suites.
"""

from .degrees import Degree, GradedMap, GradedSpace, koszul_sign, shift, tensor_with_braiding

__all__ = [
    "Degree",
    "GradedSpace",
    "GradedMap",
    "koszul_sign",
    "shift",
    "tensor_with_braiding",
]

__version__ = "0.1.0"
