"""
Model parameter files.

A model file is a flat list of key = value lines under a single section header
naming the regime:

    [asym]
    mu_u = -1
    mu_v = -2
    sigma_u = 1
    sigma_v = 2
    rho = -0.3

Values are parsed as numbers where possible; priority_probs takes a
comma-separated list. Parsing does not validate; build_model does.
"""

import configparser
import logging
from pathlib import Path
from typing import Dict, Tuple, Union

from seesaw.models.regimes import Regime

logger = logging.getLogger(__name__)


def _coerce(key: str, raw: str) -> object:
    text = raw.strip()
    if key == "priority_probs":
        return tuple(float(item) for item in text.split(",") if item.strip())
    if key in ("n", "horizon", "seed", "batch"):
        try:
            return int(text)
        except ValueError:
            pass
    try:
        return float(text)
    except ValueError:
        return text


def load_model_file(path: Union[str, Path]) -> Tuple[Regime, Dict[str, object]]:
    """
    Read a model parameter file.

    Args:
        path: File to read

    Returns:
        (regime, parameter mapping)

    Raises:
        OSError: If the file cannot be read
        ValueError: If it does not have exactly one known regime section
    """
    parser = configparser.ConfigParser(interpolation=None)
    with open(path, "r", encoding="utf-8") as f:
        try:
            parser.read_file(f)
        except configparser.MissingSectionHeaderError as e:
            raise ValueError(f"{path}: model file needs a [regime] header") from e
        except configparser.Error as e:
            raise ValueError(f"{path}: {e}") from e

    sections = parser.sections()
    if len(sections) != 1:
        raise ValueError(f"{path}: expected exactly one [regime] section, found {sections}")
    try:
        regime = Regime(sections[0].strip().lower())
    except ValueError as e:
        choices = ", ".join(r.value for r in Regime)
        raise ValueError(f"{path}: unknown regime [{sections[0]}], expected one of {choices}") from e

    params = {key: _coerce(key, value) for key, value in parser.items(sections[0])}
    logger.debug(f"Loaded {regime.value} model file {path}: {sorted(params)}")
    return regime, params
