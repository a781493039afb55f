"""Exact cohomology workbench over Z/2^k: finite modules, mapping cones,
group cochains, archimedean Tate complexes and totally positive cohomology."""

from .algebra import DyadicRing, FinMod, ModHom, Submodule, Subquotient
from .complexes import ChainMap, Complex, Cone, cone
from .groups import FinGroup, Subgroup, catalog_group
from .gmodules import Character, GModule
from .positive import GlobalSetup, Place

__version__ = "0.1.0"

__all__ = [
    "ChainMap",
    "Character",
    "Complex",
    "Cone",
    "DyadicRing",
    "FinGroup",
    "FinMod",
    "GModule",
    "GlobalSetup",
    "ModHom",
    "Place",
    "Subgroup",
    "Submodule",
    "Subquotient",
    "catalog_group",
    "cone",
]
