from fractions import Fraction

from src.floyd.errors import InvalidConfig
from src.utils.rationals import format_rational, parse_rational

SETTINGS_SCHEMA = {
    "default_tol": {
        "title": "Default tolerance of interval enclosures",
        "type": "rational",
        "default": "1/1000000",
        "min": "0",
        "exclusive_min": True,
    },
    "tail_term_budget": {
        "title": "Maximum number of series terms expanded by a tail sum",
        "type": "int",
        "default": 1000000,
        "min": 1,
    },
    "ratio_refine_rounds": {
        "title": "Tolerance tightening rounds for ratio enclosures",
        "type": "int",
        "default": 8,
        "min": 0,
        "max": 64,
    },
    "svg_canvas": {
        "title": "SVG canvas side, px",
        "type": "int",
        "default": 640,
        "options": [320, 480, 640, 960],
        "allow_custom": True,
        "min": 64,
        "max": 8192,
    },
    "svg_margin": {
        "title": "SVG margin, px",
        "type": "int",
        "default": 24,
        "min": 0,
        "max": 512,
    },
    "log_dir": {
        "title": "Log directory",
        "type": "string",
        "default": "./log",
    },
    "log_enabled": {
        "title": "Write log files",
        "description": "If disabled, Logger.write is a no-op.",
        "type": "bool",
        "default": True,
        "options": [True, False],
    },
}

BASE_SETTINGS = {code: str(meta.get("default")).lower() if meta["type"] == "bool" else str(meta.get("default"))
                 for code, meta in SETTINGS_SCHEMA.items()}

_overrides: dict[str, str] = {}


def reset_settings() -> None:
    _overrides.clear()


def update_setting(code: str, value) -> str:
    normalized, errors = validate_setting_value(code, value)
    if errors:
        raise InvalidConfig(f"Invalid setting {code!r}", details=errors)
    _overrides[code] = normalized
    return normalized


def get_setting_str(code: str, default: str | None = None) -> str | None:
    val = _overrides.get(code, BASE_SETTINGS.get(code))
    return val if val is not None else default

def get_setting_bool(code: str, default: bool = False) -> bool:
    val = get_setting_str(code)
    if val is None:
        return default
    return val.lower() in ("1", "true", "yes", "on")

def get_setting_int(code: str, default: int) -> int:
    val = get_setting_str(code)
    if val is None:
        return default
    try:
        return int(val)
    except ValueError:
        return default

def get_setting_rational(code: str, default: Fraction) -> Fraction:
    val = get_setting_str(code)
    if val is None:
        return default
    return parse_rational(val)


def _parse_bool(value) -> bool | None:
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
    return None


def validate_setting_value(code: str, value) -> tuple[str | None, dict | None]:
    schema = SETTINGS_SCHEMA.get(code)
    if not schema:
        return None, {"code": "Unknown setting"}

    setting_type = schema.get("type")
    options = schema.get("options") or []
    allow_custom = bool(schema.get("allow_custom", False))
    min_val = schema.get("min")
    max_val = schema.get("max")

    if setting_type == "int":
        if isinstance(value, bool):
            return None, {"value": "Must be integer"}
        try:
            parsed = int(value)
        except (TypeError, ValueError):
            return None, {"value": "Must be integer"}

        if options and parsed not in options and not allow_custom:
            return None, {"value": "Must be one of options"}
        if min_val is not None and parsed < int(min_val):
            return None, {"value": f"Must be >= {min_val}"}
        if max_val is not None and parsed > int(max_val):
            return None, {"value": f"Must be <= {max_val}"}
        return str(parsed), None

    if setting_type == "rational":
        try:
            parsed = value if isinstance(value, Fraction) else parse_rational(str(value))
        except Exception:
            return None, {"value": "Must be rational p/q"}
        if min_val is not None:
            bound = parse_rational(min_val)
            if parsed < bound or (schema.get("exclusive_min") and parsed == bound):
                return None, {"value": f"Must be > {min_val}"}
        return format_rational(parsed), None

    if setting_type == "bool":
        parsed = _parse_bool(value)
        if parsed is None:
            return None, {"value": "Must be boolean"}
        return "true" if parsed else "false", None

    if setting_type == "string":
        if not isinstance(value, str) or not value:
            return None, {"value": "Must be non-empty string"}
        if options and value not in options and not allow_custom:
            return None, {"value": "Must be one of options"}
        return value, None

    return None, {"value": "Unsupported type"}
