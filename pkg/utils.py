# utils.py
import json
import logging
import os
import random
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence


class SymplHodgeError(Exception):
    """Base class for every error raised by the engine."""


# ---------------- PATH HELPERS ----------------
def get_project_root() -> str:
    """Return the absolute path to the project root."""
    return os.path.dirname(os.path.abspath(__file__))


def get_models_dir(folder: str = "models") -> str:
    """Return full path to the folder holding sample model files."""
    return os.path.join(get_project_root(), folder)


def get_settings_path(filename: str = "settings.json") -> str:
    return os.path.join(get_project_root(), "assets", filename)


def ensure_folder(path: str):
    """Create folder if it doesn't exist."""
    if path and not os.path.exists(path):
        os.makedirs(path)


# ---------------- SETTINGS ----------------
DEFAULT_SETTINGS: Dict[str, Any] = {
    "seed": 20240521,
    "random_samples": 30,
    "coefficient_range": [-3, 3],
    "max_degree": None,
    "schema_version": 1,
}


def load_settings(path: Optional[str] = None) -> Dict[str, Any]:
    """Defaults overlaid with assets/settings.json when it can be read."""
    settings = dict(DEFAULT_SETTINGS)
    path = path or get_settings_path()
    try:
        with open(path, "r", encoding="utf-8") as f:
            loaded = json.load(f)
        if not isinstance(loaded, dict):
            raise ValueError("settings file must hold a JSON object")
        for key, value in loaded.items():
            if key in settings:
                settings[key] = value
            else:
                get_logger(__name__).warning("Ignoring unknown setting '%s'", key)
    except FileNotFoundError:
        get_logger(__name__).debug("No settings file at %s, using defaults", path)
    except (OSError, ValueError) as e:
        get_logger(__name__).warning("Could not load settings from %s, using defaults. %s", path, e)
    return settings


# ---------------- LOGGING ----------------
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def setup_logging(verbose: int = 0):
    """Configure the root logger once; everything goes to stderr."""
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


# ---------------- FORMAT HELPERS ----------------
def format_fraction(value: Fraction) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def matrix_to_strings(rows: Sequence[Sequence[Fraction]]) -> List[List[str]]:
    """Nested lists of rational strings, the JSON form of a matrix."""
    return [[format_fraction(x) for x in row] for row in rows]


# ---------------- RANDOM HELPERS ----------------
def make_rng(seed: Optional[int] = None) -> random.Random:
    return random.Random(resolve_seed(seed))


def random_vector(rng: random.Random, length: int, coefficient_range=(-3, 3),
                  nonzero: bool = True) -> List[Fraction]:
    """Integer coefficients drawn uniformly from coefficient_range (inclusive)."""
    lo, hi = coefficient_range
    while True:
        vec = [Fraction(rng.randint(lo, hi)) for _ in range(length)]
        if not nonzero or length == 0 or any(vec):
            return vec


def resolve_seed(seed: Optional[int] = None) -> int:
    return DEFAULT_SETTINGS["seed"] if seed is None else seed
