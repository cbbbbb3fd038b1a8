"""
Scenario configuration for Wind Causality Studio

Scenario files are TOML text with a ``format = 1`` key:

    format = 1
    name = "strong_constant"

    [domain]
    box = [-2.0, 4.0, -3.0, 3.0]
    resolution = [128, 128]

    [norm]
    kind = "euclidean"

    [wind]
    kind = "constant"
    wx = 2.0
    wy = 0.0

    [[exclusions]]
    kind = "disk"
    center = [0.0, 0.0]
    radius = 0.1

    [numerics]
    horizon = 1.2

Unknown keys are errors. Diagnostics carry the line and column of the
offending key where it can be located.
"""

import json
import logging
import re
try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_core import PydanticCustomError

from app.config import settings
from app.engines.causal_engine import CSTKScenario
from app.errors import ConfigError, Diagnostic, ExpressionError
from app.geometry.norm_kernel import RandersNorm, RiemannianNorm
from app.geometry.wind_field import (
    ConstantNormField,
    ConstantWind,
    Disk,
    EllipseNormField,
    ExpressionWind,
    RadialWind,
    Rect,
    RigidRotationWind,
    WindStructure,
    build_wind_structure,
)
from app.scenario.expressions import FieldExpr

logger = logging.getLogger("scenario.config")

FORMAT_VERSION = 1
MIN_RESOLUTION = 16
MAX_RESOLUTION = 4096

Scalar = Union[float, str]


def _expression(value: Scalar) -> Scalar:
    """Validate expression strings, leaving numbers untouched"""
    if isinstance(value, str):
        try:
            FieldExpr.parse(value)
        except ExpressionError as e:
            raise PydanticCustomError(
                "expression", "{message}", {"message": str(e), "column": e.column}
            ) from e
    return value


def _field(value: Scalar) -> Union[float, FieldExpr]:
    return FieldExpr.parse(value) if isinstance(value, str) else float(value)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DomainSection(_Section):
    box: Tuple[float, float, float, float]
    resolution: Tuple[int, int] = settings.default_resolution

    @field_validator("box")
    @classmethod
    def _positive_extent(cls, box):
        if not (box[1] > box[0] and box[3] > box[2]):
            raise ValueError("box must be [xmin, xmax, ymin, ymax] with positive extent")
        return box

    @field_validator("resolution")
    @classmethod
    def _resolution_bounds(cls, resolution):
        if not all(MIN_RESOLUTION <= n <= MAX_RESOLUTION for n in resolution):
            raise ValueError(f"resolution must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}] per axis")
        return resolution


class NormSection(_Section):
    kind: Literal["euclidean", "ellipse", "randers-base"] = "euclidean"
    a: Scalar = 1.0
    b: Scalar = 1.0
    angle: Scalar = 0.0
    omega_x: float = 0.0
    omega_y: float = 0.0

    check_expressions = field_validator("a", "b", "angle")(_expression)

    @model_validator(mode="after")
    def _consistent(self):
        if self.kind == "euclidean" and (self.a != 1.0 or self.b != 1.0 or self.angle != 0.0):
            raise ValueError("euclidean norm takes no a, b or angle")
        if self.kind != "randers-base" and (self.omega_x or self.omega_y):
            raise ValueError("omega_x and omega_y only apply to randers-base")
        if self.kind == "randers-base" and any(isinstance(v, str) for v in (self.a, self.b, self.angle)):
            raise ValueError("randers-base takes constant a, b and angle")
        for name in ("a", "b"):
            value = getattr(self, name)
            if not isinstance(value, str) and value <= 0:
                raise ValueError(f"{name} must be positive")
        return self


class WindSection(_Section):
    kind: Optional[Literal["constant", "rigid_rotation", "radial", "expression"]] = None
    wx: Optional[Scalar] = None
    wy: Optional[Scalar] = None
    omega: Optional[float] = None
    k: Optional[float] = None

    check_expressions = field_validator("wx", "wy")(_expression)

    @model_validator(mode="after")
    def _consistent(self):
        if self.kind is None:
            if isinstance(self.wx, str) or isinstance(self.wy, str):
                self.kind = "expression"
            elif self.omega is not None:
                self.kind = "rigid_rotation"
            elif self.k is not None:
                self.kind = "radial"
            else:
                self.kind = "constant"
        required = {
            "constant": ("wx", "wy"),
            "rigid_rotation": ("omega",),
            "radial": ("k",),
            "expression": ("wx", "wy"),
        }[self.kind]
        allowed = set(required)
        for name in ("wx", "wy", "omega", "k"):
            value = getattr(self, name)
            if name in required and value is None:
                raise ValueError(f"{self.kind} wind needs {name}")
            if name not in allowed and value is not None:
                raise ValueError(f"{name} does not apply to {self.kind} wind")
        if self.kind == "constant" and (isinstance(self.wx, str) or isinstance(self.wy, str)):
            raise ValueError("constant wind takes numbers; use kind = \"expression\" for strings")
        return self


class DiskExclusion(_Section):
    kind: Literal["disk"]
    center: Tuple[float, float]
    radius: float = Field(gt=0)


class RectExclusion(_Section):
    kind: Literal["rect"]
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @model_validator(mode="after")
    def _ordered(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("rect needs xmin < xmax and ymin < ymax")
        return self


ExclusionSection = Annotated[Union[DiskExclusion, RectExclusion], Field(discriminator="kind")]


class NumericsSection(_Section):
    horizon: float = Field(default=settings.default_horizon, gt=0)
    dt: Optional[float] = Field(default=None, gt=0)
    seed: int = settings.default_seed
    critical_tolerance: float = Field(default=settings.critical_tolerance, gt=0)


class ScenarioConfig(_Section):
    format: Literal[1]
    name: str = "scenario"
    domain: DomainSection
    norm: NormSection = Field(default_factory=NormSection)
    wind: WindSection
    exclusions: List[ExclusionSection] = Field(default_factory=list)
    numerics: NumericsSection = Field(default_factory=NumericsSection)

    @model_validator(mode="after")
    def _exclusions_inside(self):
        x0, x1, y0, y1 = self.domain.box
        for region in self.exclusions:
            ex0, ex1, ey0, ey1 = _exclusion(region).bounds()
            if not (x0 < ex0 and ex1 < x1 and y0 < ey0 and ey1 < y1):
                raise ValueError("excluded regions must lie strictly inside the box")
        return self

    def with_overrides(
        self,
        resolution: Optional[Tuple[int, int]] = None,
        horizon: Optional[float] = None,
        dt: Optional[float] = None,
        seed: Optional[int] = None,
    ) -> "ScenarioConfig":
        """Copy with command-line numerics applied, re-validated"""
        data = self.model_dump()
        if resolution is not None:
            data["domain"]["resolution"] = tuple(resolution)
        for key, value in (("horizon", horizon), ("dt", dt), ("seed", seed)):
            if value is not None:
                data["numerics"][key] = value
        try:
            return ScenarioConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError([Diagnostic(_message(err)) for err in e.errors()]) from e


# ---------------------------------------------------------------------------
# Parsing and serialising
# ---------------------------------------------------------------------------

_TOML_LOCATION = re.compile(r"\(at line (\d+), column (\d+)\)")


def parse_config(text: str) -> ScenarioConfig:
    """
    Parse scenario text into a validated ScenarioConfig

    Args:
        text: UTF-8 TOML text with ``format = 1``

    Returns:
        ScenarioConfig

    Raises:
        ConfigError: with one Diagnostic (line, column) per problem
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _TOML_LOCATION.search(str(e))
        line, column = (int(match.group(1)), int(match.group(2))) if match else (None, None)
        message = _TOML_LOCATION.sub("", str(e)).strip()
        logger.info(f"Scenario syntax error: {e}")
        raise ConfigError([Diagnostic(f"syntax error: {message}", line, column)]) from e

    if data.get("format") != FORMAT_VERSION and "format" in data:
        line, column = _locate(text, ("format",))
        raise ConfigError([Diagnostic(f"unsupported format {data['format']!r}, expected {FORMAT_VERSION}", line, column)])

    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as e:
        diagnostics = []
        for err in e.errors():
            line, column = _locate(text, err["loc"])
            ctx = err.get("ctx") or {}
            if err["type"] == "expression" and line is not None and ctx.get("column"):
                column = _value_column(text, line) + int(ctx["column"]) - 1
            diagnostics.append(Diagnostic(_message(err), line, column))
        logger.info(f"Scenario rejected with {len(diagnostics)} diagnostic(s)")
        raise ConfigError(diagnostics) from e
    logger.info(f"Parsed scenario {config.name!r}")
    return config


def load_config(path: str) -> ScenarioConfig:
    """Read and parse a scenario file"""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError([Diagnostic(f"cannot read scenario file {path}: {e}")]) from e
    return parse_config(text)


def _message(err: dict) -> str:
    loc = ".".join(str(part) for part in err["loc"])
    if err["type"] == "extra_forbidden":
        return f"unknown key {loc!r}"
    if err["type"] == "missing":
        return f"missing key {loc!r}"
    text = err["msg"]
    if text.startswith("Value error, "):
        text = text[len("Value error, ") :]
    return f"{loc}: {text}" if loc else text


def _locate(text: str, loc) -> Tuple[Optional[int], Optional[int]]:
    """Best-effort (line, column) of a validation location in the TOML text"""
    lines = text.splitlines()
    start = 0
    found: Tuple[Optional[int], Optional[int]] = (None, None)
    table = None
    for part in loc:
        if isinstance(part, int):
            if table is None:
                continue
            # n-th [[table]] header
            headers = [i for i, line in enumerate(lines) if re.match(rf"^\s*\[\[\s*{re.escape(table)}\s*\]\]", line)]
            if part < len(headers):
                start = headers[part]
                found = (start + 1, 1)
            continue
        name = str(part)
        header = re.compile(rf"^\s*\[+\s*{re.escape(name)}\s*\]+")
        key = re.compile(rf"(^|[\s{{,]){re.escape(name)}\s*=")
        for i in range(start, len(lines)):
            if header.match(lines[i]):
                start, found, table = i, (i + 1, lines[i].index(name) + 1), name
                break
            match = key.search(lines[i])
            if match:
                column = match.start() + (0 if match.group(1) == "" else 1) + 1
                start, found = i, (i + 1, column)
                break
    return found


def _value_column(text: str, line: int) -> int:
    """1-based column just inside the first string value on a line"""
    content = text.splitlines()[line - 1]
    quote = re.search(r"=\s*([\"'])", content)
    return quote.end() + 1 if quote else 1


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"Cannot serialise {type(value).__name__}")


def serialize_config(config: ScenarioConfig) -> str:
    """TOML text that parses back to an equal ScenarioConfig"""
    data = config.model_dump(exclude_none=True)
    out = [f"format = {FORMAT_VERSION}", f"name = {_toml_value(data['name'])}", ""]
    for section in ("domain", "norm", "wind"):
        out.append(f"[{section}]")
        out.extend(f"{key} = {_toml_value(value)}" for key, value in data[section].items())
        out.append("")
    for region in data["exclusions"]:
        out.append("[[exclusions]]")
        out.extend(f"{key} = {_toml_value(value)}" for key, value in region.items())
        out.append("")
    out.append("[numerics]")
    out.extend(f"{key} = {_toml_value(value)}" for key, value in data["numerics"].items())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Building
# ---------------------------------------------------------------------------

def _exclusion(region: Union[DiskExclusion, RectExclusion]):
    if isinstance(region, DiskExclusion):
        return Disk(tuple(region.center), region.radius)
    return Rect(region.xmin, region.xmax, region.ymin, region.ymax)


def _norm_field(section: NormSection):
    if section.kind == "euclidean":
        return ConstantNormField(RiemannianNorm.euclidean())
    if section.kind == "randers-base":
        h = RiemannianNorm.ellipse(float(section.a), float(section.b), float(section.angle)).h
        return ConstantNormField(RandersNorm(h, (section.omega_x, section.omega_y)))
    if not any(isinstance(v, str) for v in (section.a, section.b, section.angle)):
        return ConstantNormField(RiemannianNorm.ellipse(float(section.a), float(section.b), float(section.angle)))
    return EllipseNormField(_field(section.a), _field(section.b), _field(section.angle))


def _wind(section: WindSection):
    if section.kind == "constant":
        return ConstantWind(float(section.wx), float(section.wy))
    if section.kind == "rigid_rotation":
        return RigidRotationWind(float(section.omega))
    if section.kind == "radial":
        return RadialWind(float(section.k))
    return ExpressionWind(_field(section.wx), _field(section.wy))


def build_wind_structure_from_config(config: ScenarioConfig) -> WindStructure:
    """WindStructure described by a scenario"""
    return build_wind_structure(
        config.domain.box,
        config.domain.resolution,
        _wind(config.wind),
        _norm_field(config.norm),
        [_exclusion(region) for region in config.exclusions],
        config.numerics.critical_tolerance,
    )


def build_scenario(config: ScenarioConfig) -> CSTKScenario:
    """CSTK spacetime over the scenario's wind structure"""
    ws = build_wind_structure_from_config(config)
    logger.info(
        f"Built scenario {config.name!r}: {ws.domain.nx}x{ws.domain.ny} grid, K {ws.killing_character}"
    )
    return CSTKScenario(
        base=ws,
        horizon=config.numerics.horizon,
        dt=config.numerics.dt,
        name=config.name,
        source=serialize_config(config),
    )
