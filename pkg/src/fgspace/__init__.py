"""Finite generalized closure spaces with a family of finite subsets, their
regular open sets, approximable mappings, and the posets they represent."""
from __future__ import annotations

__version__ = "0.1.0"

from .closurespace import ClosureSpec, GCSpace, TauSpec, validate_gcs
from .errors import FGSpaceError
from .fgcs import FGCSpace, enumerate_regulars, is_regular_open, validate_fgcs, way_below
from .finposet import FinPoset, MonotoneMap, classify_poset, poset_to_fgcs, roundtrip_iso
from .morphisms import AMRelation, am_apply, am_compose, am_identity, validate_am
from .setcore import Report, Subset, SubsetFamily, Universe
from .subclasses import f_sups, is_consistent, is_locally_consistent

__all__ = [
    "AMRelation", "ClosureSpec", "FGCSpace", "FGSpaceError", "FinPoset", "GCSpace", "MonotoneMap",
    "Report", "Subset", "SubsetFamily", "TauSpec", "Universe", "am_apply", "am_compose", "am_identity",
    "classify_poset", "enumerate_regulars", "f_sups", "is_consistent", "is_locally_consistent",
    "is_regular_open", "poset_to_fgcs", "roundtrip_iso", "validate_am", "validate_fgcs", "validate_gcs",
    "way_below",
]
