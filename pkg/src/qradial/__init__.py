"""Exact and high-precision q-series toolkit for mock theta radial limits."""

from .exactnum import Cyclo, Rat, cyclo_embed, cyclo_inv, cyclo_root, lift
from .series import PochSpec, Series, pochhammer
from .catalog import SeriesId, SeriesTag, appell_lerch, eval_numeric, expand

__version__ = "0.1.0"

__all__ = [
    "Cyclo",
    "Rat",
    "cyclo_embed",
    "cyclo_inv",
    "cyclo_root",
    "lift",
    "PochSpec",
    "Series",
    "pochhammer",
    "SeriesId",
    "SeriesTag",
    "appell_lerch",
    "eval_numeric",
    "expand",
]
