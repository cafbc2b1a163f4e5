#!/usr/bin/env python

"""
    Volume models for tree stems: the cylinder/cone/frustum family behind the
    dimensional model, taper, Honer's equation, Smalian's log formula and the
    toilet-roll example. Lengths are in feet unless a function says otherwise.
"""

from dataclasses import dataclass
import logging
import math

from .util import InvalidMeasurementError, OutOfRangeError, require_positive

log = logging.getLogger(__name__)

CONE_GAMMA = math.pi / 12
CYLINDER_GAMMA = math.pi / 4

# taper measured directly on 79 trees in the forestry literature
LITERATURE_TAPER = -0.0098

STANDARD_LOG_LENGTH_FT = 16.0

SOLID_KINDS = ("cylinder", "cone", "frustum")


@dataclass(frozen=True)
class SolidModel:
    kind: str
    lam: float

    def __post_init__(self):
        if self.kind not in SOLID_KINDS:
            raise InvalidMeasurementError(f"unknown solid '{self.kind}'")
        if not 0 <= self.lam <= 1:
            raise OutOfRangeError(f"lambda must lie in [0, 1], got {self.lam!r}")
        if (self.kind == "cylinder" and self.lam != 1) or (
            self.kind == "cone" and self.lam != 0
        ):
            raise InvalidMeasurementError(
                f"a {self.kind} cannot have lambda {self.lam}"
            )

    @classmethod
    def cylinder(cls):
        return cls("cylinder", 1.0)

    @classmethod
    def cone(cls):
        return cls("cone", 0.0)

    @classmethod
    def frustum(cls, lam):
        return cls("frustum", lam)

    @property
    def gamma(self):
        return solid_gamma(self.lam)

    def to_json(self):
        return {"kind": self.kind, "lambda": self.lam}


@dataclass(frozen=True)
class TaperEstimate:
    lambda_hat: float
    taper: float
    reference_d: float
    reference_h: float

    def to_json(self):
        return {
            "lambda_hat": self.lambda_hat,
            "taper": self.taper,
            "reference_d_ft": self.reference_d,
            "reference_h_ft": self.reference_h,
        }


@dataclass(frozen=True)
class LogSegment:
    d_small: float
    d_large: float
    length: float

    def __post_init__(self):
        if not 0 < self.d_small <= self.d_large:
            raise InvalidMeasurementError(
                f"log end diameters must satisfy 0 < small <= large, "
                f"got {self.d_small!r} and {self.d_large!r}"
            )
        require_positive(length=self.length)


@dataclass(frozen=True)
class HonerParams:
    """Honer's equation V = d^2 / (c1 + c2/h), with d in inches, h in feet
    and V in cubic feet."""

    c1: float
    c2: float

    def to_json(self):
        return {
            "c1": self.c1,
            "c2": self.c2,
            "units": {"d": "in", "h": "ft", "V": "ft3"},
        }


# published parameters for Black Cherry, fitted on 21 trees
CHERRY_HONER = HonerParams(0.033, 393.336)


def solid_gamma(lam):
    """Volume coefficient of a frustum, V = gamma d^2 h."""
    return CONE_GAMMA * (1 + lam + lam * lam)


def solid_volume(model, d, h):
    require_positive(d=d, h=h)
    return model.gamma * d * d * h


def lambda_from_gamma(gamma0):
    """Top/bottom diameter ratio of the frustum with volume coefficient gamma0,
    the positive root of lam^2 + lam + (1 - 12 gamma0 / pi) = 0."""
    if not CONE_GAMMA <= gamma0 <= CYLINDER_GAMMA:
        raise OutOfRangeError(
            f"gamma0 = {gamma0!r} lies outside [pi/12, pi/4] "
            f"(cone {CONE_GAMMA:.6f}, cylinder {CYLINDER_GAMMA:.6f})"
        )
    c = 1 - 12 * gamma0 / math.pi
    lam = (-1 + math.sqrt(1 - 4 * c)) / 2
    return min(max(lam, 0.0), 1.0)


def taper(lam, d, h):
    """Diameter change per unit height, (lam - 1) d / h."""
    if not h > 0:
        raise InvalidMeasurementError(f"h must be positive, got {h!r}")
    return (lam - 1) * d / h


def estimate_taper(gamma0, d, h):
    lam = lambda_from_gamma(gamma0)
    return TaperEstimate(lam, taper(lam, d, h), d, h)


def honer_volume(d_in, h, params=CHERRY_HONER):
    """Honer's volume with d in inches as measured, h in feet."""
    if not h > 0:
        raise InvalidMeasurementError(f"h must be positive, got {h!r}")
    denominator = params.c1 + params.c2 / h
    if not denominator > 0:
        raise OutOfRangeError(f"c1 + c2/h = {denominator!r} is not positive")
    return d_in * d_in / denominator


def smalian_volume(segment):
    return math.pi / 8 * (segment.d_small ** 2 + segment.d_large ** 2) * segment.length


def stem_volume(segments):
    segments = list(segments)
    if not segments:
        raise InvalidMeasurementError("a stem needs at least one log")
    return math.fsum(smalian_volume(s) for s in segments)


def smalian_stem(diameters, log_length=STANDARD_LOG_LENGTH_FT):
    """Log segments for a stem cut into equal logs, from the end diameters
    measured base to top."""
    diameters = list(diameters)
    if len(diameters) < 2:
        raise InvalidMeasurementError("a stem needs diameters at both ends of a log")
    return [
        LogSegment(min(lower, upper), max(lower, upper), log_length)
        for lower, upper in zip(diameters, diameters[1:])
    ]


def toilet_roll_length(D, d, t):
    """Paper left on a roll of outer diameter D around a core of diameter d."""
    require_positive(d=d, t=t)
    if D < d:
        raise InvalidMeasurementError(f"roll diameter {D!r} is smaller than core {d!r}")
    return math.pi / 4 * (D * D - d * d) / t


def toilet_roll_shrink_rate(D, t):
    """dD/dL, the diameter lost per unit length of paper used."""
    require_positive(D=D, t=t)
    return 2 * t / (math.pi * D)


def meyer_cubic_volume(d, k, b=3):
    """Diameter-only model V = k d^b."""
    require_positive(d=d)
    return k * d ** b
