#!/usr/bin/env python

"""
    Buckingham Pi reduction.

    A set of physical variables gives a dimension matrix (rows are base
    dimensions, columns are variables). Every vector in the exact rational
    kernel of that matrix is the exponent vector of a dimensionless monomial,
    and a kernel basis has n - rank(M) members.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
import logging
import math
from typing import Tuple

import sympy

from .units import BASE_DIMENSIONS, DIMENSIONLESS, LENGTH, VOLUME, parse_dimension_expr
from .util import DataError, DegenerateInputError, DimensionError, UsageError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class VariableSpec:
    name: str
    dimension: object

    def __str__(self):
        return f"{self.name}:{self.dimension}"


def parse_variable_spec(token):
    """Parses "name:dims", e.g. "V:L^3" or "d:L"."""
    name, sep, dims = token.partition(":")
    if not sep or not name.strip():
        raise UsageError(f"variable must be written as name:dims, got {token!r}")
    return VariableSpec(name.strip(), parse_dimension_expr(dims))


def _check_names(variables):
    if not variables:
        raise UsageError("at least one variable is required")
    names = [v.name for v in variables]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise UsageError("duplicate variable names: {}".format(", ".join(duplicates)))


@dataclass(frozen=True)
class DimensionlessGroup:
    variables: Tuple[VariableSpec, ...]
    vector: Tuple[Fraction, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        vector = tuple(Fraction(e) for e in self.vector)
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "vector", vector)
        if len(vector) != len(self.variables):
            raise ValueError("one exponent per variable is required")
        if not any(vector):
            raise ValueError("a dimensionless group needs a nonzero exponent")
        if not self.dimension.is_dimensionless:
            raise DimensionError(f"group {self} has dimension {self.dimension}")

    @classmethod
    def from_exponents(cls, variables, exponents, label=""):
        """Builds a group from a {name: exponent} map; absent names get 0."""
        unknown = set(exponents) - {v.name for v in variables}
        if unknown:
            raise UsageError("unknown variables: {}".format(", ".join(sorted(unknown))))
        return cls(
            tuple(variables),
            tuple(Fraction(exponents.get(v.name, 0)) for v in variables),
            label,
        )

    @property
    def exponents(self):
        return {v.name: e for v, e in zip(self.variables, self.vector)}

    @property
    def dimension(self):
        return reduce(
            lambda acc, pair: acc * pair[0].dimension ** pair[1],
            zip(self.variables, self.vector),
            DIMENSIONLESS,
        )

    def to_json(self):
        return {
            name: f"{e.numerator}/{e.denominator}" for name, e in self.exponents.items()
        }

    def __str__(self):
        def power(name, e):
            return name if e == 1 else f"{name}^{e}"

        top = [power(v.name, e) for v, e in zip(self.variables, self.vector) if e > 0]
        bottom = [
            power(v.name, -e) for v, e in zip(self.variables, self.vector) if e < 0
        ]
        text = "*".join(top) or "1"
        if len(bottom) == 1:
            text += "/" + bottom[0]
        elif bottom:
            text += "/(" + "*".join(bottom) + ")"
        return text


@dataclass(frozen=True)
class PiBasis:
    variables: Tuple[VariableSpec, ...]
    groups: Tuple[DimensionlessGroup, ...]
    rank: int
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if self.groups:
            vectors = sympy.Matrix(
                [[_rational(e) for e in g.vector] for g in self.groups]
            )
            if vectors.rank() != len(self.groups):
                raise DegenerateInputError("groups are not linearly independent")

    @property
    def size(self):
        return len(self.groups)

    def __len__(self):
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)

    def __getitem__(self, label):
        for group in self.groups:
            if group.label == label:
                return group
        raise KeyError(label)

    def to_json(self):
        return {
            "label": self.label,
            "variables": {v.name: str(v.dimension) for v in self.variables},
            "rank": self.rank,
            "size": self.size,
            "groups": {g.label: g.to_json() for g in self.groups},
        }


def _rational(value):
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def dimension_matrix(variables):
    """Rows are the base dimensions any variable uses (Length alone when
    every variable is dimensionless); columns follow the variable order."""
    _check_names(variables)
    used = [
        i
        for i in range(len(BASE_DIMENSIONS))
        if any(v.dimension.exponents[i] for v in variables)
    ] or [BASE_DIMENSIONS.index("L")]
    return [[v.dimension.exponents[i] for v in variables] for i in used]


def matrix_rank(matrix):
    return int(sympy.Matrix([[_rational(x) for x in row] for row in matrix]).rank())


def _canonical(vector):
    """Scales a rational vector to coprime integers with a positive leading entry."""
    denominators = [x.denominator for x in vector]
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), denominators, 1)
    integers = [int(x * lcm) for x in vector]
    divisor = reduce(math.gcd, (abs(i) for i in integers), 0) or 1
    integers = [i // divisor for i in integers]
    leading = next(i for i in integers if i != 0)
    if leading < 0:
        integers = [-i for i in integers]
    return tuple(Fraction(i) for i in integers)


def nullspace_basis(matrix):
    """Exact kernel basis of a rational matrix, n - rank(M) vectors long,
    each scaled to coprime integers with its first nonzero entry positive."""
    if not matrix or not matrix[0]:
        return []
    m = sympy.Matrix([[_rational(x) for x in row] for row in matrix])
    basis = []
    for column in m.nullspace():
        vector = [Fraction(int(x.p), int(x.q)) for x in column]
        basis.append(_canonical(vector))
    return basis


def basis_for(variables, label=""):
    """Runs the whole reduction for a list of VariableSpec."""
    variables = tuple(variables)
    matrix = dimension_matrix(variables)
    rank = matrix_rank(matrix)
    groups = tuple(
        DimensionlessGroup(variables, vector, f"pi{i}")
        for i, vector in enumerate(nullspace_basis(matrix))
    )
    log.debug(
        "%d variables, rank %d -> %d dimensionless groups",
        len(variables),
        rank,
        len(groups),
    )
    return PiBasis(variables, groups, rank, label)


TREE_VARIABLES = (
    VariableSpec("V", VOLUME),
    VariableSpec("d", LENGTH),
    VariableSpec("h", LENGTH),
)

TOILET_ROLL_VARIABLES = (
    VariableSpec("L", LENGTH),
    VariableSpec("D", LENGTH),
    VariableSpec("d", LENGTH),
    VariableSpec("t", LENGTH),
)

# (response group, explanatory group) for each plotted formulation
TREE_FORMULATIONS = {
    "a": ({"V": 1, "h": -3}, {"d": 2, "h": -2}),
    "b": ({"V": 1, "h": -3}, {"d": 1, "h": -1}),
    "c": ({"V": 1, "d": -3}, {"h": 1, "d": -1}),
    "d": ({"V": 1, "d": -3}, {"d": 1, "h": -1}),
}


def groups_for_trees():
    """The four hand-picked formulations (a)-(d) of V, d and h, each a pair
    pi0 (response) and pi1 (explanatory)."""
    rank = matrix_rank(dimension_matrix(TREE_VARIABLES))
    bases = {}
    for label, (response, explanatory) in TREE_FORMULATIONS.items():
        groups = (
            DimensionlessGroup.from_exponents(TREE_VARIABLES, response, "pi0"),
            DimensionlessGroup.from_exponents(TREE_VARIABLES, explanatory, "pi1"),
        )
        bases[label] = PiBasis(TREE_VARIABLES, groups, rank, label)
    return bases


def toilet_roll_groups():
    return basis_for(TOILET_ROLL_VARIABLES, label="toilet-roll")


def evaluate_group(group, values):
    """Value of a group for {name: Quantity}, computed in canonical units."""
    result = 1.0
    for variable, exponent in zip(group.variables, group.vector):
        if exponent == 0:
            continue
        if variable.name not in values:
            raise DataError(f"no value given for variable '{variable.name}'")
        quantity = values[variable.name]
        if quantity.dimension != variable.dimension:
            raise DimensionError(
                f"'{variable.name}' should have dimension {variable.dimension}, "
                f"got {quantity.dimension}"
            )
        base = quantity.canonical_value
        if base == 0 and exponent < 0:
            raise DegenerateInputError(f"'{variable.name}' is zero in a denominator")
        if exponent.denominator == 1:
            result *= base ** exponent.numerator
        elif base <= 0:
            raise DegenerateInputError(
                f"cannot raise non-positive '{variable.name}' to {exponent}"
            )
        else:
            result *= base ** float(exponent)
    return result
