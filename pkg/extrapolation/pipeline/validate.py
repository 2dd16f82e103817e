from extrapolation import config
from extrapolation.errors import ConfigError

_CHOICES = {
    "scenario": config.SCENARIOS,
    "basis": config.BASIS_KINDS,
    "activation": config.ACTIVATIONS,
    "norm": config.NORM_MODES,
    "anchor_set": config.ANCHOR_SETS,
    "penalty": ["endpoints", "grid"],
}


def _type_ok(value, expected):
    expected = expected if isinstance(expected, tuple) else (expected,)
    if isinstance(value, bool):
        return bool in expected
    if isinstance(value, int) and float in expected:
        return True
    return isinstance(value, expected)


def validate_config(cfg, require=True):
    """Raise ConfigError naming the first bad key; return cfg otherwise."""
    if require:
        for key in config.REQUIRED_CONFIG_KEYS:
            if key not in cfg:
                raise ConfigError(key, "required key is missing")

    for key, value in cfg.items():
        if key not in config.CONFIG_KEYS:
            raise ConfigError(key, "unknown key")
        if not _type_ok(value, config.CONFIG_KEYS[key]):
            raise ConfigError(key, f"unexpected type {type(value).__name__}")
        if key in _CHOICES and value not in _CHOICES[key]:
            raise ConfigError(key, f"'{value}' is not one of {', '.join(_CHOICES[key])}")

    for method in cfg.get("methods") or []:
        if method not in config.METHODS:
            raise ConfigError("methods", f"unknown method '{method}'")
    if cfg.get("seed") is not None and cfg["seed"] < 0:
        raise ConfigError("seed", "must be nonnegative")
    return cfg
