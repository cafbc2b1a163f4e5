#!/usr/bin/env python

try:
    from .__version__ import __version__
except ImportError:
    __version__ = "source"
__title__ = "mensura"
