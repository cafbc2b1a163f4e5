#!/usr/bin/env python
# encoding: utf-8

import json

from .text_exporter import TextExporter


class JSONExporter(TextExporter):
    """This Exporter writes reports as JSON at full float precision."""

    names = ["json"]
    extension = "json"

    @classmethod
    def export_report(cls, report):
        return json.dumps(report, indent=2, allow_nan=True) + "\n"
