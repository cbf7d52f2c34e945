"""Run-description files.

Line-oriented ``key = value`` pairs grouped under ``[section]`` headers,
``#`` comments. Physical quantities carry a unit suffix and are converted to
SI on parse::

    material = niobium

    [barrier]
    d = 1 nm
    V0 = 0.3 eV

    [device]
    area = 1 um^2

    [iv]
    I_max = 40 mA

Extra materials can be registered with ``[material.<name>]`` sections that
override fields of a ``base`` material. Unknown sections, keys and units are
errors.
"""

import dataclasses
import hashlib
import re
from dataclasses import dataclass

from .constants import CONSTANTS, BarrierParams, SuperconductorParams, bcs_gap, builtin_material
from .errors import ConfigError, UnknownMaterialError

_e = CONSTANTS.e

UNITS = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9, "pm": 1e-12, "angstrom": 1e-10},
    "area": {"m^2": 1.0, "cm^2": 1e-4, "mm^2": 1e-6, "um^2": 1e-12, "nm^2": 1e-18},
    "current": {"A": 1.0, "mA": 1e-3, "uA": 1e-6, "nA": 1e-9},
    "voltage": {"V": 1.0, "mV": 1e-3, "uV": 1e-6},
    "energy": {"J": 1.0, "eV": _e, "meV": 1e-3 * _e, "ueV": 1e-6 * _e},
    "resistance": {"ohm": 1.0, "kohm": 1e3, "Mohm": 1e6},
    "frequency": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15},
    "temperature": {"K": 1.0, "mK": 1e-3},
    "density": {"m^-3": 1.0, "cm^-3": 1e6},
    "current_density": {"A/m^2": 1.0, "A/cm^2": 1e4},
    "mass": {"kg": 1.0, "m_e": CONSTANTS.m_e},
    "dos": {"J^-1 m^-3": 1.0, "eV^-1 m^-3": 1 / _e, "eV^-1 cm^-3": 1e6 / _e},
    "power_dbm": {"dBm": 1.0},
}
SI_UNIT = {dim: next(iter(table)) for dim, table in UNITS.items()}

_NUMBER = re.compile(r"^([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*)$")


@dataclass(frozen=True)
class Field:
    kind: str  # a UNITS dimension, or float/int/bool/str/choice
    default: object = None
    required: bool = False
    choices: tuple = ()
    is_list: bool = False


_MATERIAL_FIELDS = {
    "T_C": Field("temperature"),
    "Delta_SC": Field("energy"),
    "rho_F": Field("dos"),
    "n_star": Field("density"),
    "J_C_max": Field("current_density"),
    "tau_n": Field("time"),
    "eps_F": Field("energy"),
}

SCHEMA = {
    "": {"material": Field("str")},
    "material": {"name": Field("str"), **_MATERIAL_FIELDS},
    "custom_material": {"base": Field("str", "niobium"), **_MATERIAL_FIELDS},
    "barrier": {
        "eps_r": Field("float", 11.68),
        "m_star": Field("mass", 2 * CONSTANTS.m_e),
        "d": Field("length", required=True),
        "V0": Field("energy", required=True),
        "gate_lever": Field("float", 1.0),
    },
    "device": {
        "area": Field("area", required=True),
        "E0": Field("energy", 0.0),
        "convention": Field("choice", "pair", choices=("pair", "bare")),
        "gap_charge": Field("choice", "e", choices=("e", "e_star")),
        "literal_half": Field("bool", False),
    },
    "output": {"dir": Field("str"), "prefix": Field("str", "sssim")},
    "iv": {
        "V_GS": Field("voltage", (0.0,), is_list=True),
        "I_max": Field("current", required=True),
        "n_points": Field("int", 201),
    },
    "lna": {
        "I_B": Field("current", required=True),
        "V_Ai": Field("voltage", required=True),
        "V_Bi": Field("voltage", required=True),
        "n_points": Field("int", 101),
    },
    "pa": {
        "Z_load": Field("resistance", 50.0),
        "I_bias": Field("current", required=True),
        "gate_high": Field("voltage", required=True),
        "gate_low": Field("voltage", 0.0),
        "R_on": Field("resistance", 0.0),
    },
    "noise": {
        "g": Field("float", 1.0),
        "window": Field("energy", 3.313e-23),
        "f_min": Field("frequency", 1e9),
        "T": Field("temperature", 4.2),
        "directional_factor": Field("bool", False),
        "literal_exponent": Field("bool", False),
        "abs_tol": Field("float", 1e-30),
        "rel_tol": Field("float", 1e-9),
        "max_depth": Field("int", 60),
        "n_samples": Field("int", 101),
    },
    "tradeoff": {
        "Z_load": Field("resistance", 50.0),
        "P_min": Field("power_dbm", -20.0),
        "P_max": Field("power_dbm", 20.0),
        "n_points": Field("int", 41),
        "anchor_current": Field("current", 20e-3),
        "power_convention": Field("choice", "peak", choices=("peak", "rms")),
    },
}
ANALYSES = ("iv", "lna", "pa", "noise", "tradeoff")


@dataclass(frozen=True)
class RunConfig:
    material: SuperconductorParams
    barrier: BarrierParams
    area: float
    analysis: str
    settings: dict
    E0: float = 0.0
    convention: str = "pair"
    gap_charge: str = "e"
    literal_half: bool = False
    custom_materials: tuple = ()
    output_dir: str = None
    prefix: str = "sssim"

    def device(self):
        from .junction import JunctionDevice

        return JunctionDevice(self.material, self.barrier, self.area,
                              convention=self.convention, literal_half=self.literal_half,
                              gap_charge=self.gap_charge)

    def digest(self):
        return hashlib.sha256(serialize_config(self).encode("utf-8")).hexdigest()


def parse_quantity(text, kind, line=None, column=None):
    """Convert one value string to SI according to ``kind``."""
    text = text.strip()
    if kind == "str":
        if not text:
            raise ConfigError("empty value", line, column)
        return text
    if kind == "bool":
        low = text.lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"expected a boolean, got {text!r}", line, column)
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"expected an integer, got {text!r}", line, column) from None
    m = _NUMBER.match(text)
    if not m:
        raise ConfigError(f"expected a number, got {text!r}", line, column)
    number, unit = float(m.group(1)), m.group(2).strip()
    if kind == "float":
        if unit:
            raise ConfigError(f"dimensionless value takes no unit, got {unit!r}", line, column)
        return number
    table = UNITS[kind]
    if not unit:
        raise ConfigError(f"missing unit for {kind} (one of: {', '.join(table)})", line, column)
    if unit not in table:
        raise ConfigError(f"unknown unit {unit!r} for {kind} (one of: {', '.join(table)})",
                          line, column)
    factor = table[unit]
    return number if factor == 1.0 else number * factor


def _parse_value(raw, spec, key, line, column):
    if spec.kind == "choice":
        value = raw.strip()
        if value not in spec.choices:
            raise ConfigError(f"{key} must be one of {', '.join(spec.choices)}, got {value!r}",
                              line, column)
        return value
    if spec.is_list:
        return tuple(parse_quantity(part, spec.kind, line, column) for part in raw.split(","))
    return parse_quantity(raw, spec.kind, line, column)


def _tokenize(text):
    """Yield (section, key, raw_value, line, column) and collect section headers."""
    section = ""
    headers = []
    entries = []
    seen = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("unterminated section header", lineno,
                                  line.index("[") + 1)
            section = stripped[1:-1].strip()
            if not section:
                raise ConfigError("empty section name", lineno, 1)
            if section in seen:
                raise ConfigError(f"duplicate section [{section}] (first at line {seen[section]})",
                                  lineno, 1)
            seen[section] = lineno
            headers.append((section, lineno))
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", lineno, len(line) - len(line.lstrip()) + 1)
        key, _, value = line.partition("=")
        column = line.index("=") + 2 + (len(value) - len(value.lstrip()))
        entries.append((section, key.strip(), value, lineno, column))
    return headers, entries


def _schema_for(section, lineno):
    if section.startswith("material."):
        if not section[len("material."):].strip():
            raise ConfigError("custom material needs a name", lineno, 1)
        return SCHEMA["custom_material"]
    if section not in SCHEMA or section == "custom_material":
        raise ConfigError(f"unknown section [{section}]", lineno, 1)
    return SCHEMA[section]


def _resolve_material(base, overrides, name=None):
    values = dataclasses.asdict(base)
    values.update(overrides)
    if "T_C" in overrides and "Delta_SC" not in overrides:
        values["Delta_SC"] = bcs_gap(values["T_C"])
    if name is not None:
        values["name"] = name
    return SuperconductorParams(**values)


def parse_config(text):
    """Strictly parse and validate a run description into a :class:`RunConfig`."""
    headers, entries = _tokenize(text)
    header_line = dict(headers)
    for section, lineno in headers:
        _schema_for(section, lineno)
    analyses = [(s, ln) for s, ln in headers if s in ANALYSES]
    if len(analyses) != 1:
        found = ", ".join(s for s, _ in analyses) or "none"
        line = analyses[1][1] if len(analyses) > 1 else None
        raise ConfigError(f"exactly one analysis section ({', '.join(ANALYSES)}) required; "
                          f"found: {found}", line)
    analysis = analyses[0][0]

    values = {}
    for section, lineno in [("", 0)] + headers:
        _schema_for(section, lineno)
        values[section] = {}
    for section, key, raw, lineno, column in entries:
        schema = _schema_for(section, lineno)
        if key not in schema:
            where = f"[{section}]" if section else "top level"
            raise ConfigError(f"unknown key {key!r} in {where}", lineno, 1)
        if key in values[section]:
            raise ConfigError(f"duplicate key {key!r}", lineno, 1)
        values[section][key] = _parse_value(raw, schema[key], key, lineno, column)

    def resolved(section):
        out = {}
        for key, spec in SCHEMA[section].items():
            if key in values.get(section, {}):
                out[key] = values[section][key]
            elif spec.required:
                raise ConfigError(f"missing required field {key!r} in [{section}]",
                                  header_line.get(section))
            else:
                out[key] = spec.default
        return out

    customs = {}
    for section, lineno in headers:
        if section.startswith("material."):
            name = section[len("material."):].strip()
            overrides = dict(values[section])
            base_name = overrides.pop("base", "niobium")
            base = customs.get(base_name) or _lookup(base_name, customs, lineno)
            customs[name] = _resolve_material(base, overrides, name=name)

    top_name = values[""].get("material")
    mat_values = dict(values.get("material", {}))
    sec_name = mat_values.pop("name", None)
    if top_name and sec_name and top_name != sec_name:
        raise ConfigError(f"material given twice ({top_name!r} and {sec_name!r})",
                          header_line.get("material"))
    mat_name = top_name or sec_name or "niobium"
    material = _resolve_material(_lookup(mat_name, customs, header_line.get("material")),
                                 mat_values)

    b = resolved("barrier")
    barrier = BarrierParams(eps_r=b["eps_r"], m_star=b["m_star"], d=b["d"], V0_base=b["V0"],
                            gate_lever=b["gate_lever"])
    dev = resolved("device")
    out = {k: values.get("output", {}).get(k, spec.default)
           for k, spec in SCHEMA["output"].items()}
    settings = resolved(analysis)
    _check_settings(analysis, settings, header_line[analysis])
    return RunConfig(
        material=material, barrier=barrier, area=dev["area"], analysis=analysis,
        settings=settings, E0=dev["E0"], convention=dev["convention"],
        gap_charge=dev["gap_charge"], literal_half=dev["literal_half"],
        custom_materials=tuple(sorted(customs.items())),
        output_dir=out["dir"], prefix=out["prefix"],
    )


def _lookup(name, customs, lineno):
    if name in customs:
        return customs[name]
    try:
        return builtin_material(name)
    except UnknownMaterialError as exc:
        known = ", ".join(sorted(customs))
        msg = str(exc) + (f"; custom: {known}" if known else "")
        raise UnknownMaterialError(msg if lineno is None else f"line {lineno}: {msg}") from None


def _check_settings(analysis, s, lineno):
    for key in ("n_points", "n_samples"):
        if key in s and s[key] < 2:
            raise ConfigError(f"{key} must be >= 2", lineno)
    if analysis == "tradeoff" and not s["P_min"] < s["P_max"]:
        raise ConfigError("P_min must be below P_max", lineno)
    if analysis == "noise" and not 1 <= s["max_depth"] <= 80:
        raise ConfigError("max_depth must lie in [1, 80]", lineno)


def _format_value(value, spec):
    if spec.kind in ("str", "choice"):
        return str(value)
    if spec.kind == "bool":
        return "true" if value else "false"
    if spec.kind == "int":
        return str(int(value))
    unit = "" if spec.kind == "float" else " " + SI_UNIT[spec.kind]
    if spec.is_list:
        return ", ".join(repr(float(v)) + unit for v in value)
    return repr(float(value)) + unit


def _material_lines(params, schema):
    return [f"{key} = {_format_value(getattr(params, key), schema[key])}"
            for key in _MATERIAL_FIELDS]


def serialize_config(cfg):
    """Render a resolved :class:`RunConfig` back to text, all values in SI."""
    lines = []
    for name, params in cfg.custom_materials:
        lines += [f"[material.{name}]", "base = niobium"]
        lines += _material_lines(params, SCHEMA["custom_material"]) + [""]
    lines += ["[material]", f"name = {cfg.material.name}"]
    lines += _material_lines(cfg.material, SCHEMA["material"]) + [""]
    b = cfg.barrier
    bs = SCHEMA["barrier"]
    lines += ["[barrier]",
              f"eps_r = {_format_value(b.eps_r, bs['eps_r'])}",
              f"m_star = {_format_value(b.m_star, bs['m_star'])}",
              f"d = {_format_value(b.d, bs['d'])}",
              f"V0 = {_format_value(b.V0_base, bs['V0'])}",
              f"gate_lever = {_format_value(b.gate_lever, bs['gate_lever'])}", ""]
    ds = SCHEMA["device"]
    lines += ["[device]",
              f"area = {_format_value(cfg.area, ds['area'])}",
              f"E0 = {_format_value(cfg.E0, ds['E0'])}",
              f"convention = {cfg.convention}",
              f"gap_charge = {cfg.gap_charge}",
              f"literal_half = {_format_value(cfg.literal_half, ds['literal_half'])}", ""]
    lines.append(f"[{cfg.analysis}]")
    schema = SCHEMA[cfg.analysis]
    for key, value in cfg.settings.items():
        lines.append(f"{key} = {_format_value(value, schema[key])}")
    lines.append("")
    lines += ["[output]", f"prefix = {cfg.prefix}"]
    if cfg.output_dir is not None:
        lines.append(f"dir = {cfg.output_dir}")
    return "\n".join(lines) + "\n"


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
