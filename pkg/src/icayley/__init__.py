"""Finite groups from Cayley tables, with exact checks for 3-valent Cayley integrality."""

from __future__ import annotations

from .errors import GroupError
from .group import FiniteGroup, Subgroup, closure, group_from_table

__version__ = "0.1.0"

__all__ = ["FiniteGroup", "Subgroup", "closure", "group_from_table", "GroupError", "__version__"]
