#!/usr/bin/env python

import copy
import logging
import os

import colorama
import xdg.BaseDirectory
import yaml

from . import __version__
from .util import UsageError

DEFAULT_CONFIG_NAME = "mensura.yaml"
XDG_RESOURCE = "mensura"

log = logging.getLogger(__name__)

default_config = {
    "version": __version__,
    "format": "json",
    "error_model": {"cv_d": 0.0082, "cv_h": 0.0408, "rho_dh": 0.52},
    "ellipsoid_level": 0.999,
    "da_gamma": 0.302,
    "honer": {"c1": 0.033, "c2": 393.336},
    "grid": {"steps": 41, "dbh_ft": [0.6, 1.8], "height_ft": [60.0, 90.0]},
    "plot": {"width": 640, "height": 480},
    "colors": {"error": "red", "warning": "yellow", "heading": "none"},
}


def config_file_path():
    """The user's config file under XDG_CONFIG_HOME, if there is one."""
    directory = xdg.BaseDirectory.load_first_config(XDG_RESOURCE)
    if directory:
        path = os.path.join(directory, DEFAULT_CONFIG_NAME)
        if os.path.exists(path):
            return path
    return None


def load_config(config_path):
    """Tries to load a config file from YAML."""
    try:
        with open(config_path, encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    except OSError as e:
        raise UsageError(f"cannot read config {config_path}: {e.strerror}")
    except yaml.YAMLError as e:
        raise UsageError(f"config {config_path} is not valid YAML: {e}")


def upgrade_config(config, defaults=default_config):
    """Fills in keys missing from a config, section by section, so older
    config files keep working when new settings are introduced. The file
    itself is left alone."""
    for key, value in defaults.items():
        if key not in config:
            config[key] = copy.deepcopy(value)
        elif isinstance(value, dict) and isinstance(config[key], dict):
            upgrade_config(config[key], value)
    return config


def verify_config(config):
    """
    Ensures colors are valid colorama.Fore attributes (or "none") and the
    error model is in range.
    """
    for key, color in config["colors"].items():
        upper_color = str(color).upper()
        if upper_color != "NONE" and not getattr(colorama.Fore, upper_color, None):
            raise UsageError(f"{key} set to invalid color: {color}")
    model = config["error_model"]
    if model["cv_d"] < 0 or model["cv_h"] < 0:
        raise UsageError("coefficients of variation in the config must be >= 0")
    if not -1 <= model["rho_dh"] <= 1:
        raise UsageError("rho_dh in the config must lie in [-1, 1]")
    if not 0 < config["ellipsoid_level"] < 1:
        raise UsageError("ellipsoid_level in the config must lie in (0, 1)")
    return True


def load_or_default(config_path=None):
    """
    Loads the config named on the command line, else the user's XDG config,
    else the defaults.
    """
    config_path = config_path or config_file_path()
    if config_path:
        log.debug("Reading configuration from file %s", config_path)
        config = load_config(config_path)
        if not isinstance(config, dict):
            raise UsageError(f"config {config_path} must be a mapping")
    else:
        log.debug("No configuration file found, using defaults")
        config = {}
    upgrade_config(config)
    verify_config(config)
    return config
