"""Completed (Tate) cohomology and completed Ext over modular group algebras."""
from .catalog import GROUP_NAMES, catalog_group, load_group, load_module, standard_module
from .completion import (
    CompletedExtElement,
    CompletedExtGroup,
    ShortExactSequence,
    completed_dims,
    completed_naive,
    completed_resolution_constr,
    completed_tate_farrell,
    connecting,
    dimension_shift,
    eckmann_shapiro_compare,
    pd_detect,
    phi_canonical,
)
from .errors import CertificateError, InputError, TatekitError, VerificationError
from .modrep import FiniteGroup, Module, ModuleMap, Subgroup, regular_module, trivial_module
from .products import cup, external, ring_table, unit, yoneda
from .resolution import complete_resolution, resolution
from .stable import stable_hom

__version__ = "0.1.0"

__all__ = [
    "GROUP_NAMES",
    "catalog_group",
    "load_group",
    "load_module",
    "standard_module",
    "CompletedExtElement",
    "CompletedExtGroup",
    "ShortExactSequence",
    "completed_dims",
    "completed_naive",
    "completed_resolution_constr",
    "completed_tate_farrell",
    "connecting",
    "dimension_shift",
    "eckmann_shapiro_compare",
    "pd_detect",
    "phi_canonical",
    "CertificateError",
    "InputError",
    "TatekitError",
    "VerificationError",
    "FiniteGroup",
    "Module",
    "ModuleMap",
    "Subgroup",
    "regular_module",
    "trivial_module",
    "cup",
    "external",
    "ring_table",
    "unit",
    "yoneda",
    "complete_resolution",
    "resolution",
    "stable_hom",
]
