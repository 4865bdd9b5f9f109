"""Concrete game constructions."""
from . import bv, cournot, ewl, meyer, mw

__all__ = ["bv", "cournot", "ewl", "meyer", "mw"]
