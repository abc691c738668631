"""JSON configuration for the harness; every field is optional."""

import json
from dataclasses import replace

from ..quad import QuadratureSpec
from .convergence import HarnessConfig

_QUAD_FIELDS = ("abs_tol", "rel_tol", "max_subdivisions", "tail_tol")
_TOP_FIELDS = {
    "modulus_rel_change": float,
    "omega_safety": float,
    "ratio_slack": float,
    "monotone_slack": float,
    "x_tail_eps": float,
    "accept_rel": float,
    "workers": int,
}
_SPEC_KEYS = ("inner", "outer", "modulus", "quadrature")


def config_from_dict(data):
    """Build a :class:`HarnessConfig` from a mapping.

    ``quadrature`` holds the tolerances used by identity checks; ``inner``,
    ``outer`` and ``modulus`` override the sweep's nested-integral settings.
    Returns ``(harness_config, quadrature_spec)``.
    """
    unknown = set(data) - set(_TOP_FIELDS) - set(_SPEC_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = HarnessConfig()
    changes = {k: cast(data[k]) for k, cast in _TOP_FIELDS.items() if k in data}
    for key in ("inner", "outer", "modulus"):
        if key in data:
            changes[key] = _spec(getattr(cfg, key), data[key], key)
    cfg = replace(cfg, **changes)
    quad = _spec(QuadratureSpec(), data.get("quadrature", {}), "quadrature")
    return cfg, quad


def _spec(base, fields, key):
    bad = set(fields) - set(_QUAD_FIELDS)
    if bad:
        raise ValueError(f"unknown keys in {key!r}: {', '.join(sorted(bad))}")
    return base.with_(**fields) if fields else base


def load_config(path=None):
    if path is None:
        return config_from_dict({})
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
