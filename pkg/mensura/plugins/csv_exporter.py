#!/usr/bin/env python
# encoding: utf-8

import csv
import io

from .text_exporter import TextExporter
from .util import flatten, is_quantity

HEADER = ("key", "value", "unit", "paper_value", "deviation")


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CSVExporter(TextExporter):
    """This Exporter flattens a report into one `key,value,unit,paper_value,deviation`
    row per number. Floats are written with repr, so no precision is lost."""

    names = ["csv"]
    extension = "csv"

    @classmethod
    def rows(cls, report):
        for key, leaf in flatten(report):
            if is_quantity(leaf):
                yield (
                    key,
                    _cell(leaf["value"]),
                    leaf["unit"],
                    _cell(leaf.get("paper_value")),
                    _cell(leaf.get("deviation")),
                )
            else:
                yield key, _cell(leaf), "", "", ""

    @classmethod
    def export_report(cls, report):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(cls.rows(report))
        return buffer.getvalue()
