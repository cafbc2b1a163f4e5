#!/usr/bin/env python
# encoding: utf-8

from .csv_exporter import CSVExporter
from .json_exporter import JSONExporter
from .text_exporter import TextExporter
from .yaml_exporter import YAMLExporter

__exporters = [CSVExporter, JSONExporter, TextExporter, YAMLExporter]

__exporter_types = {name: plugin for plugin in __exporters for name in plugin.names}

EXPORT_FORMATS = sorted(__exporter_types.keys())


def get_exporter(format):
    for exporter in __exporters:
        if hasattr(exporter, "names") and format in exporter.names:
            return exporter
    return None
