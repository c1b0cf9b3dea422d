"""Kitaev lattice models built from finite-dimensional semisimple Hopf algebras."""
from .hopf import (HopfAlgebra, dual_hopf, function_algebra, group_algebra, haar_integral,
                   named_group, verify_hopf_axioms)
from .double import drinfeld_double
from .surface import CellDecomposition, Site, parse_sites, parse_surface
from .model import LatticeModel, ground_space_dim
from .excited import DoubleBlocks, LabeledModel, protected_space

__version__ = "0.1.0"

__all__ = [
    "HopfAlgebra", "dual_hopf", "function_algebra", "group_algebra", "haar_integral",
    "named_group", "verify_hopf_axioms", "drinfeld_double", "CellDecomposition", "Site",
    "parse_sites", "parse_surface", "LatticeModel", "ground_space_dim", "DoubleBlocks",
    "LabeledModel", "protected_space",
]
