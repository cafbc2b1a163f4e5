import csv
import io
import json
import os
from xml.etree import ElementTree

from behave import then


def _walk(struct, path):
    for node in path.split("."):
        try:
            struct = struct[int(node)]
        except (ValueError, KeyError):
            struct = struct[node]
    return struct


def _json_output(context):
    return json.loads(context.stdout_capture.getvalue())


@then("the output should be parsable as json")
def check_output_json(context):
    out = context.stdout_capture.getvalue()
    assert json.loads(out), out


@then('"{field}" in the json output should have {number:d} elements')
@then('"{field}" in the json output should have 1 element')
def check_output_field(context, field, number=1):
    struct = _walk(_json_output(context), field)
    assert len(struct) == number, len(struct)


@then('"{field}" in the json output should contain "{key}"')
def check_output_field_key(context, field, key):
    struct = _walk(_json_output(context), field)
    assert key in struct, [key, struct]


@then("the json output should contain {path}")
@then('the json output should contain {path} = "{value}"')
def check_json_output_path(context, path, value=None):
    """ E.g.
    the json output should contain formulations.a.monomial = "True"
    """
    struct = _walk(_json_output(context), path)
    if value is not None:
        assert str(struct) == value, struct
    else:
        assert struct is not None


@then("the json value {path} should be about {expected:g} within {tolerance:g}")
def check_json_value_close(context, path, expected, tolerance):
    struct = _walk(_json_output(context), path)
    assert abs(struct - expected) <= tolerance, [struct, expected]


@then("every csv row with a value should agree with the json output")
def check_csv_against_json(context):
    """Splits captured stdout into the csv run that came first and the json
    run that came second, then checks each csv row against the json."""
    out = context.stdout_capture.getvalue()
    start = out.index("\n{") + 1
    rows = list(csv.DictReader(io.StringIO(out[:start])))
    report = json.loads(out[start:])
    assert rows
    for row in rows:
        if not row["unit"]:
            continue
        quantity = _walk(report, row["key"])
        if quantity["value"] is None:
            assert row["value"] == "", row
        else:
            assert float(row["value"]) == quantity["value"], row
        assert row["unit"] == quantity["unit"], row


@then('the file "{path}" should be a valid SVG document')
def assert_valid_svg(context, path):
    tree = ElementTree.parse(path)
    assert tree.getroot().tag.endswith("svg"), tree.getroot().tag


@then('the csv file "{path}" should have {number:d} rows of "{series}"')
def csv_series_count(context, path, number, series):
    with open(path, encoding="utf-8", newline="") as f:
        rows = [row for row in csv.DictReader(f) if row.get("series") == series]
    assert len(rows) == number, len(rows)


@then('the directory "{path}" should contain "{filename}"')
def directory_contains(context, path, filename):
    assert filename in os.listdir(path), os.listdir(path)


@then('the json output should list the discrepancy "{key}"')
def check_discrepancy(context, key):
    report = _json_output(context)
    ids = [entry["id"] for entry in report["discrepancies"]]
    assert key in ids, ids


@then('the json output should not list the discrepancy "{key}"')
def check_no_discrepancy(context, key):
    report = _json_output(context)
    ids = [entry["id"] for entry in report["discrepancies"]]
    assert key not in ids, ids
