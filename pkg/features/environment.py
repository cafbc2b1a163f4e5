import os
import shutil
import sys
from unittest.mock import patch

CWD = os.getcwd()
WORKING_DIRS = ("configs", "csv", "output")


def clean_all_working_dirs():
    for folder in WORKING_DIRS:
        working_dir = os.path.join("features", folder)
        if os.path.exists(working_dir):
            shutil.rmtree(working_dir)


def before_feature(context, feature):
    if "skip" in feature.tags:
        feature.skip("Marked with @skip")
        return

    if "skip_win" in feature.tags and "win32" in sys.platform:
        feature.skip("Skipping on Windows")
        return


def before_scenario(context, scenario):
    """Before each scenario, copy the config and CSV test data into working dirs
    and hide any config the user has under XDG_CONFIG_HOME."""
    clean_all_working_dirs()
    for folder in ("configs", "csv"):
        shutil.copytree(
            os.path.join("features", "data", folder), os.path.join("features", folder)
        )
    os.mkdir(os.path.join("features", "output"))

    context.config_patch = patch("mensura.config.config_file_path", return_value=None)
    context.config_patch.start()

    if "skip" in scenario.effective_tags:
        scenario.skip("Marked with @skip")
        return

    if "skip_win" in scenario.effective_tags and "win32" in sys.platform:
        scenario.skip("Skipping on Windows")
        return


def after_scenario(context, scenario):
    """After each scenario, remove the working dirs."""
    context.config_patch.stop()
    if os.getcwd() != CWD:
        os.chdir(CWD)
    clean_all_working_dirs()
