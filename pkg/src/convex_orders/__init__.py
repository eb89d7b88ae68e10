"""Convex orders on the positive roots of untwisted affine root systems."""

from .affine import AffineWeylElement, Root
from .biconvex import BiconvexParam, Window
from .cartan import CartanData, FiniteWeylElement, build_cartan
from .chains import ChainParam, RowParam
from .orders import ImaginaryOrder, OrderSpec
from .subsys import Subsystem, build_subsystem
from .words import InfiniteWord

__all__ = [
    "AffineWeylElement",
    "BiconvexParam",
    "CartanData",
    "ChainParam",
    "FiniteWeylElement",
    "ImaginaryOrder",
    "InfiniteWord",
    "OrderSpec",
    "Root",
    "RowParam",
    "Subsystem",
    "Window",
    "build_cartan",
    "build_subsystem",
]
