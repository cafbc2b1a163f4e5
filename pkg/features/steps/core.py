import os
from pathlib import Path
import shlex
import sys
from unittest.mock import patch

import toml

from behave import given, then, when
from mensura import cli, config


def ushlex(command):
    return shlex.split(command, posix="win32" not in sys.platform)


@given('we use the config "{config_file}"')
def set_config(context, config_file):
    full_path = os.path.abspath(os.path.join("features", "configs", config_file))
    context.config_patch.stop()
    context.config_patch = patch.object(config, "config_file_path", return_value=full_path)
    context.config_patch.start()


@when('we change directory to "{path}"')
def move_dir(context, path):
    os.chdir(path)


@when('we run "{command}"')
def run(context, command):
    args = ushlex(command)

    try:
        with patch("sys.argv", args):
            cli.run(args[1:])
            context.exit_status = 0
    except SystemExit as e:
        context.exit_status = e.code


@when('we run "{command}" twice')
def run_twice(context, command):
    outputs = []
    for _ in range(2):
        start = len(context.stdout_capture.getvalue())
        run(context, command)
        outputs.append(context.stdout_capture.getvalue()[start:])
    context.repeated_outputs = outputs


@then("we should get an error")
def has_error(context):
    assert context.exit_status != 0, context.exit_status


@then("we should get no error")
def no_error(context):
    assert context.exit_status == 0, context.exit_status


@then("the exit status should be {code:d}")
def exit_status(context, code):
    assert context.exit_status == code, context.exit_status


@then("both outputs should be identical")
def outputs_identical(context):
    first, second = context.repeated_outputs
    assert first, "no output"
    assert first == second


@then("the output should contain pyproject.toml version")
def check_output_version_inline(context):
    out = context.stdout_capture.getvalue()
    pyproject = (Path(__file__) / ".." / ".." / ".." / "pyproject.toml").resolve()
    pyproject_contents = toml.load(pyproject)
    pyproject_version = pyproject_contents["tool"]["poetry"]["version"]
    assert pyproject_version in out, pyproject_version


@then("the output should contain")
@then('the output should contain "{text}"')
@then('the output should contain "{text}" or "{text2}"')
def check_output_inline(context, text=None, text2=None):
    text = text or context.text
    out = context.stdout_capture.getvalue()
    assert text in out or (text2 is not None and text2 in out), [text, out]


@then('the output should not contain "{text}"')
def check_output_not_inline(context, text):
    out = context.stdout_capture.getvalue()
    assert text not in out, [text, out]


@then("the error output should contain")
@then('the error output should contain "{text}"')
def check_error_output_inline(context, text=None):
    text = text or context.text
    out = context.stderr_capture.getvalue()
    assert text in out, [text, out]


@then("the error output should be a single line")
def check_error_single_line(context):
    lines = context.stderr_capture.getvalue().strip().splitlines()
    assert len(lines) == 1, lines


@then('the file "{path}" should exist')
def file_exists(context, path):
    assert os.path.isfile(path), path


@then('the file "{path}" should contain "{text}"')
def file_contains(context, path, text):
    with open(path, encoding="utf-8") as f:
        contents = f.read()
    assert text in contents, [text, path]


@then('the file "{path}" should have {number:d} lines')
def file_lines(context, path, number):
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    assert len(lines) == number, len(lines)
