"""Flat key=value configuration for the CLI and the spectral calibration.

The config file location comes from the CROWNKIT_CONFIG environment
variable; absent that, built-in defaults apply.  Lines are `key = value`
with `#` comments.  Calibration entries written by `crownkit parseval
--calibrate` carry a provenance comment describing the oracle run.
"""

from __future__ import annotations

import os
from pathlib import Path

from .numerics import QuadratureConfig

ENV_VAR = "CROWNKIT_CONFIG"

DEFAULTS = {
    "geometry_abs_tol": 1e-10,
    "geometry_rel_tol": 1e-9,
    "representation_abs_tol": 1e-7,
    "representation_rel_tol": 1e-9,
    "max_subdivisions": 4000,
    "lambda_max": 32.0,
    "plancherel_form": "lambda_tanh_half",  # weight lambda*tanh(pi lambda/2)
    "plancherel_constant": None,             # None -> calibrate on first use
    "seed": 20090,
}


def parse_config_text(text: str) -> dict:
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def _coerce(key: str, value: str):
    default = DEFAULTS.get(key)
    if isinstance(default, bool):
        return value.lower() in ("1", "true", "yes")
    if isinstance(default, int) and not isinstance(default, bool):
        return int(value)
    if isinstance(default, float) or default is None and key.endswith("constant"):
        return float(value)
    if isinstance(default, str):
        return value
    try:
        return float(value)
    except ValueError:
        return value


def load_config(path: str | os.PathLike | None = None) -> dict:
    """Defaults overlaid with the file from `path` or $CROWNKIT_CONFIG."""
    cfg = dict(DEFAULTS)
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path:
        text = Path(path).read_text()
        for key, value in parse_config_text(text).items():
            cfg[key] = _coerce(key, value)
    return cfg


def quadrature_configs(cfg: dict) -> tuple[QuadratureConfig, QuadratureConfig]:
    """(geometry, representation) quadrature policies from a config dict."""
    geo = QuadratureConfig(cfg["geometry_abs_tol"], cfg["geometry_rel_tol"],
                           int(cfg["max_subdivisions"]))
    rep = QuadratureConfig(cfg["representation_abs_tol"],
                           cfg["representation_rel_tol"],
                           int(cfg["max_subdivisions"]))
    return geo, rep


def write_calibration(path: str | os.PathLike, constant: float,
                      provenance: str) -> None:
    """Append the Parseval calibration constant with its oracle description."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(f"# calibration oracle: {provenance}\n")
        fh.write(f"plancherel_constant = {constant!r}\n")
