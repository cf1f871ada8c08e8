"""Experiment configuration: JSON document, strict keys, stable hash.

Unknown keys are errors, not warnings; a silently ignored typo in a
hyperparameter name would invalidate a reproduction. Every validation
failure names the offending field with its dotted path.
"""

import hashlib
import json
import math

from ..errors import ConfigError


def _positive(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and x > 0


def _non_negative(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and x >= 0


def _pos_int(x):
    return isinstance(x, int) and not isinstance(x, bool) and x > 0


def _prior(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and 0.0 < x <= 1.0


def _fraction(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and 0.0 <= x <= 1.0


def _momentum(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and 0.0 <= x < 1.0


def _bool(x):
    return isinstance(x, bool)


def _string(x):
    return isinstance(x, str) and bool(x)


def _seed(x):
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


_OPTIMIZER_FIELDS = {
    "learning_rate": (None, _positive, "must be > 0"),
    "momentum": (0.9, _momentum, "must be in [0, 1)"),
    "weight_decay": (0.0, _non_negative, "must be >= 0"),
    "schedule_step": (50, _pos_int, "must be a positive integer"),
    "epochs": (None, _pos_int, "must be a positive integer"),
    "batch_size": (128, _pos_int, "must be a positive integer"),
}

# field -> (default, validator, message); None default with no marker means
# the field is required when its section is used.
_SCHEMA = {
    "seed": ("REQUIRED", _seed, "must be a non-negative integer"),
    "deterministic": (True, _bool, "must be a boolean"),
    "output_dir": ("out", _string, "must be a non-empty string"),
    "data": {
        "kind": ("REQUIRED", lambda x: x in ("glyphs", "gaussians", "idx"), "must be one of glyphs|gaussians|idx"),
        "class_prior": ("REQUIRED", _prior, "must be in (0, 1]"),
        "n_labeled_per_class": ("REQUIRED", _pos_int, "must be a positive integer"),
        "augment": (False, _bool, "must be a boolean"),
        # glyphs
        "n_train": (20000, _pos_int, "must be a positive integer"),
        "n_test": (5000, _pos_int, "must be a positive integer"),
        "pool_size": (100000, _pos_int, "must be a positive integer"),
        "pool_positive_fraction": (None, _fraction, "must be in [0, 1]"),
        "cache_dir": (None, _string, "must be a non-empty string"),
        # gaussians
        "classes": (2, lambda x: _pos_int(x) and x >= 2, "must be an integer >= 2"),
        "per_class": (500, _pos_int, "must be a positive integer"),
        "separation": (10.0, _non_negative, "must be >= 0"),
        "std": (1.0, _positive, "must be > 0"),
        "positive_classes": ([0], lambda x: isinstance(x, list) and x and all(isinstance(i, int) for i in x), "must be a non-empty list of class indices"),
        "pool_per_class": (500, _pos_int, "must be a positive integer"),
        # idx
        "train_images": (None, _string, "must be a path"),
        "train_labels": (None, _string, "must be a path"),
        "test_images": (None, _string, "must be a path"),
        "test_labels": (None, _string, "must be a path"),
        "pool_images": (None, _string, "must be a path"),
        "pool_sealed": (None, _string, "must be a path"),
        "num_classes": (10, _pos_int, "must be a positive integer"),
    },
    "teacher": {
        **_OPTIMIZER_FIELDS,
        "learning_rate": (0.05, _positive, "must be > 0"),
        "epochs": (10, _pos_int, "must be a positive integer"),
        "weight_decay": (0.0005, _non_negative, "must be >= 0"),
        "conv_channels": ([6, 16], None, None),
        "dense_widths": ([120, 84], None, None),
    },
    "pu": {
        **_OPTIMIZER_FIELDS,
        "learning_rate": (0.001, _positive, "must be > 0"),
        "epochs": (200, _pos_int, "must be a positive integer"),
        "weight_decay": (0.005, _non_negative, "must be >= 0"),
        "iters_per_epoch": (None, _pos_int, "must be a positive integer"),
        "gamma": (1.0, _positive, "must be > 0"),
        "attention": (True, _bool, "must be a boolean"),
        "attention_ratio": (4, _pos_int, "must be a positive integer"),
        "conv_channels": ([8, 16], None, None),
        "dense_width": (32, _pos_int, "must be a positive integer"),
    },
    "distill": {
        **_OPTIMIZER_FIELDS,
        "learning_rate": (0.1, _positive, "must be > 0"),
        "epochs": (100, _pos_int, "must be a positive integer"),
        "weight_decay": (0.0005, _non_negative, "must be >= 0"),
        "temperature": (1.0, _positive, "must be > 0"),
        "robust": (True, _bool, "must be a boolean"),
        "num_vectors": (10, _pos_int, "must be a positive integer"),
        "epsilon": (None, _non_negative, "must be >= 0"),
        "weight_floor": (0.001, _positive, "must be > 0"),
    },
}


def _validate_section(values, schema, path):
    if not isinstance(values, dict):
        raise ConfigError(path or "config", "must be an object")
    out = {}
    for key, value in values.items():
        dotted = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(dotted, "unknown key")
        spec = schema[key]
        if isinstance(spec, dict):
            out[key] = _validate_section(value, spec, dotted)
        else:
            default, validator, message = spec
            if value is None:
                if default == "REQUIRED":
                    raise ConfigError(dotted, "required field is null")
                out[key] = None
            elif validator is not None and not validator(value):
                raise ConfigError(dotted, message)
            else:
                out[key] = value
    for key, spec in schema.items():
        dotted = f"{path}.{key}" if path else key
        if isinstance(spec, dict):
            if key not in out:
                out[key] = _validate_section({}, spec, dotted)
        else:
            default = spec[0]
            if key not in out:
                if default == "REQUIRED":
                    raise ConfigError(dotted, "missing required field")
                out[key] = default
    return out


def validate_config(document):
    """Apply defaults and range checks; returns the effective config dict."""
    cfg = _validate_section(document, _SCHEMA, "")
    if not math.isfinite(cfg["data"]["class_prior"]):
        raise ConfigError("data.class_prior", "must be finite")
    return cfg


def load_config(path, seed_override=None, out_override=None, deterministic_override=None):
    try:
        with open(path) as fh:
            document = json.load(fh)
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    if seed_override is not None:
        document["seed"] = seed_override
    if out_override is not None:
        document["output_dir"] = out_override
    if deterministic_override is not None:
        document["deterministic"] = deterministic_override
    return validate_config(document)


def canonical_config_bytes(cfg):
    """Byte-stable serialization of the effective config."""
    return json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode("utf-8")


def config_hash(cfg):
    return hashlib.sha256(canonical_config_bytes(cfg)).hexdigest()
