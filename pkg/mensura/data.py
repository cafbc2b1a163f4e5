#!/usr/bin/env python

"""
    Tree datasets: Meyer's 31 Black Cherry trees, built in, and CSV files
    with the header `dbh,height,volume` for other species.

    Records keep the values exactly as measured together with their units
    and convert to feet and cubic feet when asked.
"""

import csv
import io
from dataclasses import dataclass, field
import hashlib
import logging
import math
import os
from typing import Optional, Tuple

import numpy as np

from . import regress
from .units import INCH, LENGTH, VOLUME, Quantity, Unit, convert, parse_unit_expr
from .util import (
    DataError,
    DegenerateInputError,
    DimensionError,
    EmptyDatasetError,
    InvalidMeasurementError,
    MissingColumnsError,
    NonNumericCellError,
)

log = logging.getLogger(__name__)

COLUMNS = ("dbh", "height", "volume")

# Diameter at breast height (in), total height (ft), actual volume (ft3)
CHERRY_TABLE = (
    (8.3, 70.0, 10.3),
    (8.6, 65.0, 10.3),
    (8.8, 63.0, 10.2),
    (10.5, 72.0, 16.4),
    (10.7, 81.0, 18.8),
    (10.8, 83.0, 19.7),
    (11.0, 66.0, 15.6),
    (11.0, 75.0, 18.2),
    (11.1, 80.0, 22.6),
    (11.2, 75.0, 19.9),
    (11.3, 79.0, 24.2),
    (11.4, 76.0, 21.0),
    (11.4, 76.0, 21.4),
    (11.7, 69.0, 21.3),
    (12.0, 75.0, 19.1),
    (12.9, 74.0, 22.2),
    (12.9, 85.0, 33.8),
    (13.3, 86.0, 27.4),
    (13.7, 71.0, 25.7),
    (13.8, 64.0, 24.9),
    (14.0, 78.0, 34.5),
    (14.2, 80.0, 31.7),
    (14.5, 74.0, 36.3),
    (16.0, 72.0, 38.3),
    (16.3, 77.0, 42.6),
    (17.3, 81.0, 55.4),
    (17.5, 82.0, 55.7),
    (17.9, 80.0, 58.3),
    (18.0, 80.0, 51.5),
    (18.0, 80.0, 51.0),
    (20.6, 87.0, 77.0),
)


def _unit(value):
    return value if isinstance(value, Unit) else parse_unit_expr(value)


@dataclass(frozen=True)
class SourceUnits:
    dbh: Unit
    height: Unit
    volume: Unit

    def __post_init__(self):
        for name, expected in (("dbh", LENGTH), ("height", LENGTH), ("volume", VOLUME)):
            unit = _unit(getattr(self, name))
            if unit.dimension != expected:
                raise DimensionError(
                    f"{name} unit '{unit}' has dimension {unit.dimension}, "
                    f"expected {expected}"
                )
            object.__setattr__(self, name, unit)

    def to_json(self):
        return {
            "dbh": str(self.dbh), "height": str(self.height), "volume": str(self.volume)
        }


CHERRY_UNITS = SourceUnits("in", "ft", "ft3")


@dataclass(frozen=True)
class TreeRecord:
    id: int
    dbh: float
    height: float
    volume: float
    units: SourceUnits = field(default=CHERRY_UNITS, repr=False)

    def __post_init__(self):
        for name in COLUMNS:
            value = getattr(self, name)
            if not value > 0:
                raise InvalidMeasurementError(
                    f"tree {self.id}: {name} must be positive, got {value!r}"
                )

    @property
    def dbh_ft(self):
        return Quantity(self.dbh, self.units.dbh).canonical_value

    @property
    def dbh_in(self):
        return convert(Quantity(self.dbh, self.units.dbh), INCH).value

    @property
    def height_ft(self):
        return Quantity(self.height, self.units.height).canonical_value

    @property
    def volume_ft3(self):
        return Quantity(self.volume, self.units.volume).canonical_value

    def quantities(self):
        """{"V", "d", "h"} quantities for evaluating dimensionless groups."""
        return {
            "V": Quantity(self.volume, self.units.volume),
            "d": Quantity(self.dbh, self.units.dbh),
            "h": Quantity(self.height, self.units.height),
        }


class Dataset:
    def __init__(self, name, records, source_units=CHERRY_UNITS):
        self.name = name
        self.records: Tuple[TreeRecord, ...] = tuple(records)
        self.source_units = source_units
        if not self.records:
            raise EmptyDatasetError(f"dataset '{name}' has no records")
        ids = [r.id for r in self.records]
        if ids != sorted(set(ids)):
            raise DataError(f"dataset '{name}' has duplicate or unordered ids")

    def __len__(self):
        """Returns the number of records"""
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, index):
        return self.records[index]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.records == other.records and self.source_units == other.source_units

    def __repr__(self):
        return f"<Dataset '{self.name}' with {len(self)} records>"

    @property
    def dbh_ft(self):
        return np.array([r.dbh_ft for r in self.records])

    @property
    def dbh_in(self):
        return np.array([r.dbh_in for r in self.records])

    @property
    def height_ft(self):
        return np.array([r.height_ft for r in self.records])

    @property
    def volume_ft3(self):
        return np.array([r.volume_ft3 for r in self.records])

    def to_csv_text(self):
        """Source values, one record per line, floats written with repr."""
        lines = [",".join(COLUMNS)]
        lines += [f"{r.dbh!r},{r.height!r},{r.volume!r}" for r in self.records]
        return "\n".join(lines) + "\n"

    def content_digest(self):
        return hashlib.sha256(self.to_csv_text().encode("utf-8")).hexdigest()


def cherry_dataset():
    """Meyer's 31 Black Cherry trees, diameters in inches at source."""
    return Dataset(
        "cherry",
        (TreeRecord(i, *row, CHERRY_UNITS) for i, row in enumerate(CHERRY_TABLE, 1)),
        CHERRY_UNITS,
    )


BUILTIN_DATASETS = {"cherry": cherry_dataset}


def _parse_cell(value, line, column):
    try:
        number = float(value.strip())
    except ValueError:
        raise NonNumericCellError(line, column, value)
    if not math.isfinite(number):
        raise NonNumericCellError(line, column, value)
    return number


def load_csv(path, dbh_unit="in", height_unit="ft", volume_unit="ft3", name=None):
    """Reads a `dbh,height,volume` CSV whose values are in the given units.
    Row order is kept; ids count from 1."""
    units = SourceUnits(dbh_unit, height_unit, volume_unit)
    name = name or os.path.splitext(os.path.basename(path))[0]
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}")
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        line = raw.count(b"\n", 0, e.start) + 1
        raise DataError(f"{path}: line {line} is not valid UTF-8")

    records = []
    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    try:
        header = next(reader, None)
        if header is None:
            raise EmptyDatasetError(f"{path} is empty")
        header = [cell.strip() for cell in header]
        missing = [c for c in COLUMNS if c not in header]
        extra = [c for c in header if c not in COLUMNS]
        if missing or extra or len(header) != len(COLUMNS):
            raise MissingColumnsError(
                f"{path}: header must be {','.join(COLUMNS)}, got {','.join(header)}"
            )
        positions = [header.index(c) for c in COLUMNS]
        for row in reader:
            if not any(cell.strip() for cell in row):
                continue
            line = reader.line_num
            if len(row) != len(COLUMNS):
                raise MissingColumnsError(
                    f"{path}: row {line} has {len(row)} cells, expected {len(COLUMNS)}"
                )
            values = [_parse_cell(row[p], line, c) for p, c in zip(positions, COLUMNS)]
            try:
                records.append(TreeRecord(len(records) + 1, *values, units))
            except InvalidMeasurementError as e:
                raise InvalidMeasurementError(f"{path}: row {line}: {e}")
    except csv.Error as e:
        raise DataError(f"{path}: line {reader.line_num}: {e}")

    if not records:
        raise EmptyDatasetError(f"{path} has a header but no records")
    log.debug("Loaded %d records from %s", len(records), path)
    return Dataset(name, records, units)


def write_csv(dataset, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(dataset.to_csv_text())
    log.debug("Wrote %d records to %s", len(dataset), path)
    return path


@dataclass(frozen=True)
class DatasetSummary:
    n: int
    mean_dbh_ft: float
    mean_height_ft: float
    mean_volume_ft3: float
    correlations: dict

    def to_json(self):
        return {
            "n": self.n,
            "mean_dbh_ft": self.mean_dbh_ft,
            "mean_height_ft": self.mean_height_ft,
            "mean_volume_ft3": self.mean_volume_ft3,
            "correlations": dict(self.correlations),
        }


def _correlation(x, y) -> Optional[float]:
    try:
        return regress.pearson(x, y)
    except DegenerateInputError:
        return None


def summary(dataset):
    """Means in feet and cubic feet plus pairwise Pearson correlations
    (None where a correlation is undefined)."""
    n = len(dataset)
    d, h, v = dataset.dbh_ft, dataset.height_ft, dataset.volume_ft3
    return DatasetSummary(
        n=n,
        mean_dbh_ft=math.fsum(d) / n,
        mean_height_ft=math.fsum(h) / n,
        mean_volume_ft3=math.fsum(v) / n,
        correlations={
            "dbh_height": _correlation(d, h),
            "dbh_volume": _correlation(d, v),
            "height_volume": _correlation(h, v),
        },
    )
