"""Finite fields, short-Weierstrass curves, pairings and Velu isogenies."""

from .field import FieldCtx, FieldError
from .curve import (
    Curve,
    CurveError,
    TorsionUnavailable,
    curve_order,
    supersingular_floor_set,
    torsion_basis,
)
from .pairing import dlog_2d, mult_dlog, point_dlog, weil_pairing
from .velu import Isogeny, InvalidKernel, velu

__all__ = [
    "Curve", "CurveError", "FieldCtx", "FieldError", "Isogeny",
    "InvalidKernel", "TorsionUnavailable", "curve_order", "dlog_2d",
    "mult_dlog", "point_dlog", "supersingular_floor_set", "torsion_basis",
    "velu", "weil_pairing",
]
