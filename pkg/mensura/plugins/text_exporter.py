#!/usr/bin/env python
# encoding: utf-8

import logging
import os

import ansiwrap

from ..util import MensuraError, colorize, sig
from .util import is_quantity

log = logging.getLogger(__name__)


class TextExporter:
    """This Exporter renders a report as indented, human readable text,
    with numbers at six significant digits."""

    names = ["text", "txt"]
    extension = "txt"
    linewrap = 79
    heading_color = "none"

    @classmethod
    def format_quantity(cls, node):
        unit = "" if node["unit"] == "1" else " " + node["unit"]
        text = sig(node["value"]) + unit
        if "paper_value" in node:
            paper, deviation = sig(node["paper_value"]), sig(node["deviation"])
            text += f"  (paper {paper}, deviation {deviation})"
        return text

    @classmethod
    def _lines(cls, node, indent=0):
        pad = "  " * indent
        items = node.items() if isinstance(node, dict) else enumerate(node, 1)
        for key, child in items:
            label = f"{pad}{key}:"
            if is_quantity(child):
                yield f"{label} {cls.format_quantity(child)}"
            elif isinstance(child, (dict, list)):
                if not child:
                    yield f"{label} -"
                    continue
                yield colorize(label, cls.heading_color) if indent == 0 else label
                yield from cls._lines(child, indent + 1)
            elif isinstance(child, str) and len(label) + len(child) >= cls.linewrap:
                yield ansiwrap.fill(
                    child,
                    cls.linewrap,
                    initial_indent=label + " ",
                    subsequent_indent=pad + "    ",
                )
            else:
                value = sig(child) if not isinstance(child, str) else child
                yield f"{label} {value}"

    @classmethod
    def export_report(cls, report):
        """Returns a string representation of a whole report."""
        return "\n".join(cls._lines(report)) + "\n"

    @classmethod
    def make_filename(cls, report):
        name = report.get("name") or report.get("dataset", {}).get("name", "report")
        return f"{name}.{cls.extension}"

    @classmethod
    def write_file(cls, report, path):
        """Exports a report into a single file."""
        try:
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(cls.export_report(report))
        except OSError as e:
            raise MensuraError(f"{e.filename} {e.strerror}")
        log.debug("Wrote %s", path)
        return f"[Report exported to {path}]"

    @classmethod
    def export(cls, report, output=None):
        """Writes into a directory if output is an existing directory, into a
        single file if output is a file name, or returns the exporter's
        representation as string if output is None."""
        if output and os.path.isdir(output):
            return cls.write_file(
                report, os.path.join(output, cls.make_filename(report))
            )
        elif output:
            return cls.write_file(report, output)
        else:
            return cls.export_report(report)
