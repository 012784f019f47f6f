"""Run configuration: typed INI file with [model], [grids], [tolerances], [paths].

Example::

    schema_version = 1        ; optional, in [DEFAULT]
    [model]
    name = so3_string
    lam = 2.0                 ; any other key is a model parameter
    [grids]
    N = 200
    M = 100
    refine = 2
    [tolerances]
    tol_hol = 1e-5
    [paths]
    path = constant:0,0,1
    report = out.json
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Optional

from .algebroid import TOL_MODEL
from .holonomy import TOL_HOL, TOL_TRANSPORT
from .paths import TOL_PATH, TOL_THIN

CONFIG_SCHEMA_VERSION = 1
TOLERANCE_KEYS = ("tol_path", "tol_transport", "tol_hol", "tol_thin", "tol_model")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    name: str = "so3_string"
    params: dict = field(default_factory=dict)
    N: int = 200
    M: int = 100
    refine: int = 2
    tol_path: float = TOL_PATH
    tol_transport: float = TOL_TRANSPORT
    tol_hol: float = TOL_HOL
    tol_thin: float = TOL_THIN
    tol_model: float = TOL_MODEL
    path: Optional[str] = None
    input: Optional[str] = None
    report: Optional[str] = None

    def __post_init__(self):
        for g in ("N", "M"):
            v = getattr(self, g)
            if not isinstance(v, int) or v < 8 or v % 2:
                raise ConfigError(f"{g} must be an even integer >= 8, got {v!r}")
        if not isinstance(self.refine, int) or self.refine < 2:
            raise ConfigError(f"refine must be an integer >= 2, got {self.refine!r}")
        for k in TOLERANCE_KEYS:
            v = getattr(self, k)
            if not v > 0:
                raise ConfigError(f"{k} must be positive, got {v!r}")

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("report")  # output location does not change results
        return d


def _num(s: str):
    try:
        return int(s)
    except ValueError:
        try:
            return float(s)
        except ValueError:
            raise ConfigError(f"model parameter value {s!r} is not a number") from None


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # N and M are case-sensitive
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {source}: {exc}") from None
    known = {"model", "grids", "tolerances", "paths"}
    extra = set(cp.sections()) - known
    if extra:
        raise ConfigError(f"unknown config section(s) {sorted(extra)}; expected {sorted(known)}")
    ver = cp.defaults().get("schema_version", str(CONFIG_SCHEMA_VERSION))
    if ver != str(CONFIG_SCHEMA_VERSION):
        raise ConfigError(f"unsupported config schema_version {ver}")
    kw: dict = {}

    def section(name):
        return {k: v for k, v in cp[name].items() if k not in cp.defaults()} if cp.has_section(name) else {}

    model = section("model")
    if "name" in model:
        kw["name"] = model.pop("name")
    kw["params"] = {k: _num(v) for k, v in model.items()}
    for k, v in section("grids").items():
        if k not in ("N", "M", "refine"):
            raise ConfigError(f"unknown [grids] key {k!r} (expected N, M, refine)")
        try:
            kw[k] = int(v)
        except ValueError:
            raise ConfigError(f"[grids] {k} must be an integer, got {v!r}") from None
    for k, v in section("tolerances").items():
        if k not in TOLERANCE_KEYS:
            raise ConfigError(f"unknown [tolerances] key {k!r} (expected one of {', '.join(TOLERANCE_KEYS)})")
        try:
            kw[k] = float(v)
        except ValueError:
            raise ConfigError(f"[tolerances] {k} must be a number, got {v!r}") from None
    for k, v in section("paths").items():
        if k not in ("path", "input", "report"):
            raise ConfigError(f"unknown [paths] key {k!r} (expected path, input, report)")
        kw[k] = v
    return RunConfig(**kw)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, path)


FIELD_NAMES = tuple(f.name for f in fields(RunConfig))
