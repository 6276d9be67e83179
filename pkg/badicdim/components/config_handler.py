"""
BadicDim - finite-scale Assouad and lower dimensions on b-adic cube trees

Copyright (C) 2026  The BadicDim developers

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU General Public License for more details.

You should have received a copy of the GNU General Public License
along with this program. If not, see <https://www.gnu.org/licenses/>.
"""

from enum import Enum
from typing import Optional, Union, Type
from dataclasses import asdict
import logging
import os
import sys
from pathlib import Path
from json import loads, dumps
from badicdim.components.definitions import CONFIG_DIR, LOGGER_NAME, ConfigType, EstimateConfig, ExtractConfig, \
    VerifyConfig, GeneratorConfig

logger = logging.getLogger(LOGGER_NAME)

AnyConfig = Union[EstimateConfig, ExtractConfig, VerifyConfig, GeneratorConfig]


class ConfigOperation(Enum):
    LOAD = "Load"
    SAVE = "Save"


def get_project_dir() -> Optional[str]:
    if sys.platform.startswith("win"):
        appdata_dir = os.getenv('LOCALAPPDATA')
        if appdata_dir is None:
            return None
        project_dir = os.path.join(appdata_dir, CONFIG_DIR)
    elif sys.platform.startswith("linux"):
        home_dir = str(Path.home())
        project_dir = os.path.join(home_dir, ".config", CONFIG_DIR)
    elif sys.platform.startswith("darwin"):
        home_dir = str(Path.home())
        project_dir = os.path.join(home_dir, "Library", "ApplicationSupport", CONFIG_DIR)
    else:
        return None
    if not os.path.isdir(project_dir):
        try:
            os.makedirs(project_dir)
        except OSError:
            return None
    return project_dir


def config_file_manager(action: ConfigOperation,
                        config_type: ConfigType,
                        config_class: Optional[Type[AnyConfig]] = None,
                        config_to_save: Optional[AnyConfig] = None) -> Optional[AnyConfig]:

    if (config_dir := get_project_dir()) is None:
        logger.warning("No project directory available, using default %s", config_type.name)
        return config_class() if config_class is not None else None

    config_file = os.path.join(config_dir, config_type.value)

    if action == ConfigOperation.LOAD:
        if not os.path.isfile(config_file):
            defaults = config_class()
            config_file_manager(ConfigOperation.SAVE, config_type, config_to_save=defaults)
            return defaults
        try:
            with open(config_file, "r") as configfile:
                loaded_config: dict = loads(configfile.read())
        except (OSError, ValueError):
            logger.warning("Unreadable config file %s, using defaults", config_file, exc_info=True)
            loaded_config = {}
        return config_class.from_dict(loaded_config)
    else:
        if config_to_save is None:
            return None
        try:
            with open(config_file, "w") as configfile:
                configfile.write(dumps(asdict(config_to_save)))
        except OSError:
            logger.warning("Failed to write config file %s", config_file, exc_info=True)
        return None


def load_estimate_config() -> EstimateConfig:
    return config_file_manager(action=ConfigOperation.LOAD,
                               config_type=ConfigType.EstimateConfig,
                               config_class=EstimateConfig)


def load_extract_config() -> ExtractConfig:
    return config_file_manager(action=ConfigOperation.LOAD,
                               config_type=ConfigType.ExtractConfig,
                               config_class=ExtractConfig)


def load_verify_config() -> VerifyConfig:
    return config_file_manager(action=ConfigOperation.LOAD,
                               config_type=ConfigType.VerifyConfig,
                               config_class=VerifyConfig)


def load_generator_config() -> GeneratorConfig:
    return config_file_manager(action=ConfigOperation.LOAD,
                               config_type=ConfigType.GeneratorConfig,
                               config_class=GeneratorConfig)
