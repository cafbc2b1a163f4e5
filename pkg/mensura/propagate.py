#!/usr/bin/env python

"""
    First-order transmission of measurement error in d and h to the volume
    V = gamma0 h d^2.

    The cross term is taken as |dV/dd| |dV/dh| rho sigma_d sigma_h, without
    the factor 2 of the usual delta method. `standard_delta=True` puts the
    factor back.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from .util import InvalidMeasurementError, OutOfRangeError, require_positive

log = logging.getLogger(__name__)

DEFAULT_CV_D = 0.0082
DEFAULT_CV_H = 0.0408
DEFAULT_RHO_DH = 0.52


@dataclass(frozen=True)
class ErrorModel:
    cv_d: float = DEFAULT_CV_D
    cv_h: float = DEFAULT_CV_H
    rho_dh: float = DEFAULT_RHO_DH

    def __post_init__(self):
        if self.cv_d < 0 or self.cv_h < 0:
            raise OutOfRangeError(
                "coefficients of variation must be >= 0, "
                f"got {self.cv_d!r}, {self.cv_h!r}"
            )
        if not -1 <= self.rho_dh <= 1:
            raise OutOfRangeError(f"rho_dh must lie in [-1, 1], got {self.rho_dh!r}")

    def to_json(self):
        return {"cv_d": self.cv_d, "cv_h": self.cv_h, "rho_dh": self.rho_dh}


@dataclass(frozen=True)
class VarianceBudget:
    term_d: float
    term_h: float
    term_cross: float
    total: float
    sigma_v: float
    dv_dd: float
    dv_dh: float

    def to_json(self):
        return {
            "term_d_ft6": self.term_d,
            "term_h_ft6": self.term_h,
            "term_cross_ft6": self.term_cross,
            "var_V_ft6": self.total,
            "sigma_V_ft3": self.sigma_v,
            "dV_dd_ft2": self.dv_dd,
            "dV_dh_ft2": self.dv_dh,
        }


@dataclass(frozen=True)
class GridCell:
    d: float
    h: float
    volume: float
    variance: float


def transmit(gamma0, d, h, error_model, standard_delta=False):
    require_positive(d=d, h=h)
    dv_dd = 2 * gamma0 * h * d
    dv_dh = gamma0 * d * d
    sigma_d = error_model.cv_d * d
    sigma_h = error_model.cv_h * h

    term_d = (dv_dd * sigma_d) ** 2
    term_h = (dv_dh * sigma_h) ** 2
    term_cross = abs(dv_dd) * abs(dv_dh) * error_model.rho_dh * sigma_d * sigma_h
    if standard_delta:
        term_cross *= 2
    total = term_d + term_h + term_cross
    return VarianceBudget(
        term_d=term_d,
        term_h=term_h,
        term_cross=term_cross,
        total=total,
        sigma_v=math.sqrt(total) if total >= 0 else float("nan"),
        dv_dd=dv_dd,
        dv_dh=dv_dh,
    )


def grid_axis(low, high, steps):
    if not (0 < low < high) or steps < 2:
        raise InvalidMeasurementError(
            "grid range needs 0 < low < high and 2+ steps, "
            f"got [{low}, {high}] x {steps}"
        )
    return np.linspace(low, high, int(steps))


def variance_grid(gamma0, d_range, h_range, error_model, standard_delta=False):
    """Cells of V and var(V) over a d x h grid, one row per height and
    d increasing along each row."""
    d_axis = grid_axis(*d_range)
    h_axis = grid_axis(*h_range)
    cells = []
    for h in h_axis:
        for d in d_axis:
            d, h = float(d), float(h)
            budget = transmit(gamma0, d, h, error_model, standard_delta)
            cells.append(GridCell(d, h, gamma0 * h * d * d, budget.total))
    log.debug("Variance grid with %d x %d cells", len(h_axis), len(d_axis))
    return cells


GRID_HEADER = ("d_ft", "h_ft", "V_ft3", "varV_ft6")


def grid_rows(cells):
    return [(c.d, c.h, c.volume, c.variance) for c in cells]
