#!/usr/bin/env python
# encoding: utf-8

import yaml

from .text_exporter import TextExporter


class YAMLExporter(TextExporter):
    """This Exporter writes reports as YAML, keeping the report's key order."""

    names = ["yaml", "yml"]
    extension = "yaml"

    @classmethod
    def export_report(cls, report):
        return yaml.safe_dump(
            report, default_flow_style=False, sort_keys=False, allow_unicode=True
        )
