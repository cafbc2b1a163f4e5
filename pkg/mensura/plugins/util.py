#!/usr/bin/env python
# encoding: utf-8


def oxford_list(lst):
    """Return Human-readable list of things obeying the object comma)"""
    lst = sorted(lst)
    if not lst:
        return "(nothing)"
    elif len(lst) == 1:
        return lst[0]
    elif len(lst) == 2:
        return lst[0] + " or " + lst[1]
    else:
        return ", ".join(lst[:-1]) + ", or " + lst[-1]


def is_quantity(node):
    return isinstance(node, dict) and "value" in node and "unit" in node


def flatten(node, prefix=""):
    """Yields (key, leaf) pairs for a nested report, keys joined with dots
    and list positions written as indices. Quantities are leaves."""
    if is_quantity(node) or not isinstance(node, (dict, list)):
        yield prefix, node
        return
    items = node.items() if isinstance(node, dict) else enumerate(node)
    for key, child in items:
        yield from flatten(child, f"{prefix}.{key}" if prefix else str(key))
