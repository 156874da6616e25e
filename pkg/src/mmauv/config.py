"""Run configuration: YAML schema, validation, and the packaged vehicle file.

Parsing walks the composed YAML node tree instead of a plain dict so
every error message can point at the offending source line. Unknown keys
are rejected everywhere; physical invariants are checked on load so a
bad file fails before any simulation starts.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

import numpy as np
import yaml

from .engine import LinearQuadraticDamping, RailSpec
from .errors import ParseError, ValidationError
from .hydrostatics import HydrostaticEnv, env_from_params
from .mass import VehicleParams
from .scenario import FORMULATIONS, NEWTON_EULER, ScenarioSpec, remus_params

_REQUIRED = object()

_FORCE_INDEX = {"X": 0, "Y": 1, "Z": 2, "K": 3, "M": 4, "N": 5}
_VELOCITY_INDEX = {"u": 0, "v": 1, "w": 2, "p": 3, "q": 4, "r": 5}

_VEHICLE_KEYS = ("mass_total", "semi_axis_a", "semi_axis_b", "rho",
                 "gravity", "displaced_volume", "added_mass", "damping")
_ADDED_KEYS = ("X_ud", "Y_vd", "Z_wd", "K_pd", "M_qd", "N_rd")


@dataclass(frozen=True)
class RunConfig:
    params: VehicleParams
    env: HydrostaticEnv
    scenario: ScenarioSpec
    formulation: str
    damping: LinearQuadraticDamping | None
    output_path: str
    decimation: int
    seed: int
    volume_derived: bool
    sha256: str


def _line(node) -> int:
    return node.start_mark.line + 1


class _Section:
    """Mapping node with duplicate detection and unknown-key rejection."""

    def __init__(self, node, name: str):
        if not isinstance(node, yaml.MappingNode):
            raise ParseError(
                f"line {_line(node)}: {name} must be a key/value section")
        self.name = name
        self.line = _line(node)
        self.nodes: dict[str, yaml.Node] = {}
        for key_node, value_node in node.value:
            if not isinstance(key_node, yaml.ScalarNode):
                raise ParseError(
                    f"line {_line(key_node)}: non-scalar key in {name}")
            key = key_node.value
            if key in self.nodes:
                raise ParseError(
                    f"line {_line(key_node)}: duplicate key {key!r} "
                    f"in {name}")
            self.nodes[key] = value_node
        self._used: set[str] = set()

    def node(self, key: str, default=_REQUIRED):
        self._used.add(key)
        if key in self.nodes:
            return self.nodes[key]
        if default is _REQUIRED:
            raise ParseError(
                f"line {self.line}: {self.name} is missing "
                f"required key {key!r}")
        return None

    def has(self, key: str) -> bool:
        return key in self.nodes

    def section(self, key: str, default=_REQUIRED):
        node = self.node(key, default)
        if node is None:
            return None
        return _Section(node, f"{self.name}.{key}")

    def float_(self, key: str, default=_REQUIRED) -> float | None:
        node = self.node(key, default)
        return None if node is None else _float_of(node, f"{self.name}.{key}")

    def int_(self, key: str, default=_REQUIRED) -> int | None:
        node = self.node(key, default)
        if node is None:
            return None
        if isinstance(node, yaml.ScalarNode) and node.tag.endswith(":int"):
            try:
                return int(node.value)
            except ValueError:
                pass
        raise ParseError(
            f"line {_line(node)}: {self.name}.{key} must be an integer")

    def str_(self, key: str, default=_REQUIRED) -> str | None:
        node = self.node(key, default)
        if node is None:
            return None
        if isinstance(node, yaml.ScalarNode) and node.tag.endswith(":str"):
            return node.value
        raise ParseError(
            f"line {_line(node)}: {self.name}.{key} must be a string")

    def vec3(self, key: str) -> np.ndarray:
        node = self.node(key)
        if not isinstance(node, yaml.SequenceNode) or len(node.value) != 3:
            raise ParseError(
                f"line {_line(node)}: {self.name}.{key} must be a "
                "3-element list")
        return np.array([_float_of(item, f"{self.name}.{key}[{i}]")
                         for i, item in enumerate(node.value)])

    def float_map(self, key: str, default=_REQUIRED) -> dict[str, float]:
        sec = self.section(key, default)
        if sec is None:
            return {}
        out = {k: _float_of(v, f"{sec.name}.{k}") for k, v in
               sec.nodes.items()}
        sec._used.update(sec.nodes)
        return out

    def reject_unknown(self) -> None:
        for key, node in self.nodes.items():
            if key not in self._used:
                raise ParseError(
                    f"line {_line(node)}: unknown key {key!r} in {self.name}")


def _float_of(node, context: str) -> float:
    if isinstance(node, yaml.ScalarNode) and (
            node.tag.endswith(":int") or node.tag.endswith(":float")):
        try:
            value = float(node.value.replace("_", ""))
        except ValueError:
            value = float("nan")
        if np.isfinite(value):
            return value
    raise ParseError(
        f"line {_line(node)}: {context} must be a finite number, "
        f"got {node.value if isinstance(node, yaml.ScalarNode) else node.id!r}")


def _anchored(section: _Section):
    """Re-raise construction-time ValidationErrors with the section line."""
    class _Ctx:
        def __enter__(self):
            return None

        def __exit__(self, exc_type, exc, tb):
            if exc_type is not None and issubclass(exc_type, ValidationError):
                raise ValidationError(
                    f"line {section.line}: {exc}") from None
            return False
    return _Ctx()


def _parse_damping(sec: _Section) -> LinearQuadraticDamping:
    linear = np.zeros((6, 6))
    for key, value in sec.float_map("linear", None).items():
        if (len(key) != 3 or key[1] != "_" or key[0] not in _FORCE_INDEX
                or key[2] not in _VELOCITY_INDEX):
            raise ParseError(
                f"line {sec.line}: bad linear damping name {key!r} "
                "(expected e.g. Z_w, M_w)")
        linear[_FORCE_INDEX[key[0]], _VELOCITY_INDEX[key[2]]] = value
    quadratic = np.zeros(6)
    for key, value in sec.float_map("quadratic", None).items():
        if (len(key) != 4 or key[1] != "_" or key[0] not in _FORCE_INDEX
                or key[2] != key[3] or key[2] not in _VELOCITY_INDEX
                or _VELOCITY_INDEX[key[2]] != _FORCE_INDEX[key[0]]):
            raise ParseError(
                f"line {sec.line}: bad quadratic damping name {key!r} "
                "(diagonal terms only, e.g. X_uu, M_qq)")
        quadratic[_FORCE_INDEX[key[0]]] = value
    sec.reject_unknown()
    with _anchored(sec):
        return LinearQuadraticDamping(linear, quadratic)


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration document."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"not valid YAML: {exc}") from exc
    if root is None:
        raise ParseError("config document is empty")
    top = _Section(root, "config")

    vehicle = top.section("vehicle")
    source = {
        "mass_total": vehicle.float_("mass_total"),
        "semi_axis_a": vehicle.float_("semi_axis_a"),
        "semi_axis_b": vehicle.float_("semi_axis_b"),
        "rho": vehicle.float_("rho"),
        "added_mass": vehicle.float_map("added_mass"),
    }
    if vehicle.has("gravity"):
        source["gravity"] = vehicle.float_("gravity")
    volume_derived = not vehicle.has("displaced_volume")
    if not volume_derived:
        source["displaced_volume"] = vehicle.float_("displaced_volume")
    damping = None
    if vehicle.has("damping"):
        damping = _parse_damping(vehicle.section("damping"))
    vehicle.reject_unknown()
    with _anchored(vehicle):
        unknown_added = [k for k in source["added_mass"]
                         if k not in _ADDED_KEYS]
        if unknown_added:
            raise ValidationError(
                f"unknown added-mass coefficients {unknown_added}")
        params = remus_params(source)
    env = env_from_params(params)

    scn = top.section("scenario")
    rail_sec = scn.section("rail")
    with _anchored(rail_sec):
        rail = RailSpec(origin=rail_sec.vec3("origin"),
                        axis=rail_sec.vec3("axis"),
                        stroke_min=rail_sec.float_("stroke_min"),
                        stroke_max=rail_sec.float_("stroke_max"))
    rail_sec.reject_unknown()
    with _anchored(scn):
        spec = ScenarioSpec(
            duration=scn.float_("duration"),
            dt=scn.float_("dt"),
            surge_force=scn.float_("surge_force"),
            mass_force_magnitude=scn.float_("mass_force_magnitude"),
            depth_deep=scn.float_("depth_deep"),
            depth_shallow=scn.float_("depth_shallow"),
            rail=rail)
    scn.reject_unknown()

    formulation = top.str_("formulation", None) or NEWTON_EULER
    if formulation not in FORMULATIONS:
        raise ValidationError(
            f"line {top.line}: formulation must be one of "
            f"{FORMULATIONS}, got {formulation!r}")
    output_path = top.str_("output_path", None) or "trajectory.csv"
    decimation = top.int_("decimation", None)
    decimation = 1 if decimation is None else decimation
    if decimation < 1:
        raise ValidationError("decimation must be a positive integer")
    seed = top.int_("seed", None)
    seed = 0 if seed is None else seed
    top.reject_unknown()

    return RunConfig(
        params=params, env=env, scenario=spec, formulation=formulation,
        damping=damping, output_path=output_path, decimation=decimation,
        seed=seed, volume_derived=volume_derived,
        sha256=hashlib.sha256(text.encode("utf-8")).hexdigest())


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def packaged_config_text(name: str = "remus100.yaml") -> str:
    return resources.files("mmauv").joinpath("data", name).read_text(
        encoding="utf-8")
