"""Scenario configuration files.

A scenario is an INI file with the sections ``[space] [group] [maps]
[iteration] [sampling] [output]``.  Scalars are plain values, vectors are
whitespace- or comma-separated numbers, and every map is one JSON object.
The full grammar is documented in ``docs/config.md``.

Errors carry the offending field (``section.key``) and, when the field is
present in the file, its line number.
"""
from __future__ import annotations

import configparser
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import circle_space as cs
from ..group_action import (Action, AffineMap, BoxDomain, CircleDomain, CircleIsometry, FiniteGroup,
                            Mapping, PiecewiseLinearMap, cyclic, cyclic_action, f_a_map, identity_map,
                            kink_involution, permutation_map, rotation2d)
from ..tolerances import ITER_TOL, MAX_ITER

SECTIONS = ("space", "group", "maps", "iteration", "sampling", "output")
SPACE_KINDS = ("box", "circle")
GROUP_KINDS = ("cyclic", "table", "word_ball", "single")
MODES = ("theorem1", "theorem2", "theorem3", "word_ball", "fixed_set")
EXPECTS = ("converged", "hypothesis_violated", "empty_center", "max_iter", "ok")
MAP_KINDS = ("identity", "affine", "rotation2d", "permutation", "piecewise_linear", "f_a",
             "involution", "circle_rotation", "circle_reflection")
MAX_ORDER = 1000


class ConfigError(ValueError):
    def __init__(self, message: str, field_name: str | None = None, line: int | None = None,
                 source: str = "<config>"):
        self.field = field_name
        self.line = line
        self.source = source
        where = source if line is None else f"{source}:{line}"
        prefix = f"{where}: " + (f"[{field_name}] " if field_name else "")
        super().__init__(prefix + message)


@dataclass
class SpaceConfig:
    kind: str = "box"
    dim: int = 1
    lo: list[float] = field(default_factory=list)
    hi: list[float] = field(default_factory=list)


@dataclass
class GroupConfig:
    kind: str = "cyclic"
    order: int = 1
    table: list[list[int]] | None = None
    max_len: int = 0


@dataclass
class IterationSettings:
    mode: str = "theorem1"
    x1: list[float] = field(default_factory=list)
    tol: float = ITER_TOL
    max_iter: int = MAX_ITER
    lam: float = 1.0
    expect: str = "converged"
    min_residual: float | None = None
    growth_rate: float = 0.0
    min_distance: float | None = None


@dataclass
class ScenarioConfig:
    space: SpaceConfig
    group: GroupConfig
    maps: dict[str, dict]
    iteration: IterationSettings
    seed: int = 0
    samples: int = 1000
    name: str = "scenario"
    description: str = ""
    out_dir: str = ""
    source: str = "<config>"

    @property
    def map_keys(self) -> list[str]:
        return list(self.maps)


# -- value parsing ----------------------------------------------------------

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*|\.\d+))?\s*$")


def parse_angle(v) -> float:
    """A number, or a multiple of pi written like ``pi``, ``-pi/2``, ``2pi/3``, ``0.5*pi``."""
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    if not isinstance(v, str):
        raise ValueError(f"not an angle: {v!r}")
    m = _ANGLE.match(v)
    if m is None:
        return float(v)
    coef = m.group(1)
    num = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * math.pi / den


def _floats(text: str) -> list[float]:
    parts = [p for p in re.split(r"[\s,]+", text.strip()) if p]
    if not parts:
        raise ValueError("empty vector")
    return [parse_angle(p) for p in parts]


def _vector(v, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError(f"{name} must be a nonempty list of numbers")
    return a


def _fmt_num(v: float) -> str:
    return repr(float(v))


def _fmt_vec(v) -> str:
    return " ".join(_fmt_num(x) for x in v)


# -- map specs --------------------------------------------------------------


def build_map(spec: dict, space: SpaceConfig) -> Mapping:
    """Turn one JSON map spec into a :class:`Mapping`; raises ValueError on bad specs."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("map spec must be a JSON object with a 'kind'")
    kind = spec["kind"]
    if kind not in MAP_KINDS:
        raise ValueError(f"unknown map kind {kind!r}; expected one of {', '.join(MAP_KINDS)}")
    is_circle = kind.startswith("circle_")
    if is_circle != (space.kind == "circle"):
        raise ValueError(f"map kind {kind!r} does not act on a {space.kind} space")
    declared = spec.get("declared_L")
    d = space.dim
    if kind == "identity":
        return CircleIsometry("rotation", 0.0) if space.kind == "circle" else identity_map(d)
    if kind == "affine":
        m = AffineMap(np.asarray(spec["matrix"], dtype=float), _vector(spec["offset"], "offset"), declared)
    elif kind == "rotation2d":
        if d != 2:
            raise ValueError("rotation2d needs dim = 2")
        center = spec.get("center", [0.0, 0.0])
        if "quarter_turns" in spec:
            m = rotation2d(quarter_turns=int(spec["quarter_turns"]), center=center)
        elif "angle" in spec:
            m = rotation2d(angle=parse_angle(spec["angle"]), center=center)
        else:
            raise ValueError("rotation2d needs 'quarter_turns' or 'angle'")
    elif kind == "permutation":
        m = permutation_map(spec["perm"], spec.get("signs"), spec.get("center"))
    elif kind == "piecewise_linear":
        m = PiecewiseLinearMap(tuple((tuple(xs), tuple(ys)) for xs, ys in spec["knots"]), declared)
    elif kind == "f_a":
        m = f_a_map(float(spec["a"]))
    elif kind == "involution":
        m = kink_involution(float(spec["c"]))
    elif kind == "circle_rotation":
        m = CircleIsometry("rotation", parse_angle(spec["angle"]))
    else:
        m = CircleIsometry("reflection", parse_angle(spec["axis"]))
    if isinstance(m, AffineMap) and m.dim != d:
        raise ValueError(f"map acts on dimension {m.dim}, space has dim = {d}")
    if isinstance(m, PiecewiseLinearMap) and len(m.knots) not in (1, d):
        raise ValueError(f"piecewise_linear has {len(m.knots)} coordinate knot lists, space has dim = {d}")
    return m


# -- loading ----------------------------------------------------------------


class _Lines:
    """Line numbers of section headers and keys, since configparser drops them."""

    def __init__(self, text: str):
        self.sections: dict[str, int] = {}
        self.keys: dict[tuple[str, str], int] = {}
        current = None
        for i, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            m = re.match(r"^\[([^\]]+)\]", line)
            if m:
                current = m.group(1).strip().lower()
                self.sections.setdefault(current, i)
                continue
            m = re.match(r"^([^=:#;\s][^=:]*?)\s*[=:]", line)
            if m and current is not None and not raw[:1].isspace():
                self.keys.setdefault((current, m.group(1).strip().lower()), i)

    def of(self, section: str, key: str | None = None) -> int | None:
        if key is not None and (section, key) in self.keys:
            return self.keys[(section, key)]
        return self.sections.get(section)


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, lines: _Lines, source: str):
        self.p = parser
        self.lines = lines
        self.source = source

    def error(self, section: str, key: str | None, message: str) -> ConfigError:
        name = section if key is None else f"{section}.{key}"
        return ConfigError(message, name, self.lines.of(section, key), self.source)

    def has(self, section: str, key: str) -> bool:
        return self.p.has_option(section, key)

    def raw(self, section: str, key: str, default=None):
        if self.p.has_option(section, key):
            return self.p.get(section, key).strip()
        return default

    def get(self, section: str, key: str, conv, default=None, required: bool = False):
        text = self.raw(section, key)
        if text is None:
            if required:
                raise self.error(section, key, "missing required value")
            return default
        try:
            return conv(text)
        except (ValueError, TypeError) as exc:
            raise self.error(section, key, f"cannot parse {text!r}: {exc}") from None

    def choice(self, section: str, key: str, options, default):
        v = self.raw(section, key, default)
        if v not in options:
            raise self.error(section, key, f"{v!r} is not one of {', '.join(options)}")
        return v


def parse_config(text: str, source: str = "<config>") -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside of any section", None, exc.lineno, source) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError("duplicate key", f"{exc.section}.{exc.option}", exc.lineno, source) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError("duplicate section", exc.section, exc.lineno, source) from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"cannot parse line {line!r}", None, lineno, source) from None
    r = _Reader(parser, _Lines(text), source)
    for sec in parser.sections():
        if sec not in SECTIONS:
            raise r.error(sec, None, f"unknown section; expected {', '.join(SECTIONS)}")
    for sec in ("space", "group", "maps", "iteration"):
        if not parser.has_section(sec):
            raise ConfigError(f"missing section [{sec}]", sec, None, source)

    space = _read_space(r)
    group = _read_group(r)
    it = _read_iteration(r, space, group)
    maps = _read_maps(r, space, group, it)

    seed = r.get("sampling", "seed", int, 0)
    samples = r.get("sampling", "samples", int, 1000)
    if samples < 1:
        raise r.error("sampling", "samples", "must be >= 1")
    name = r.raw("output", "name", "scenario")
    if not re.fullmatch(r"[A-Za-z0-9_.-]+", name):
        raise r.error("output", "name", "use letters, digits, '_', '-' or '.' only")
    return ScenarioConfig(space, group, maps, it, seed, samples, name,
                          r.raw("output", "description", ""), r.raw("output", "dir", ""), source)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError("file not found", None, None, str(path))
    return parse_config(path.read_text(), str(path))


def _read_space(r: _Reader) -> SpaceConfig:
    kind = r.choice("space", "kind", SPACE_KINDS, "box")
    if kind == "circle":
        for key in ("dim", "lo", "hi"):
            if r.has("space", key):
                raise r.error("space", key, "not used by the circle space")
        return SpaceConfig("circle", 1, [0.0], [cs.TWO_PI])
    dim = r.get("space", "dim", int, required=True)
    if dim < 1:
        raise r.error("space", "dim", "must be >= 1")
    bounds = []
    for key, default in (("lo", -1.0), ("hi", 1.0)):
        v = r.get("space", key, _floats, [default])
        if len(v) == 1:
            v = v * dim
        if len(v) != dim:
            raise r.error("space", key, f"has {len(v)} entries, dim = {dim}")
        bounds.append(v)
    if any(a > b for a, b in zip(*bounds)):
        raise r.error("space", "lo", "lo must not exceed hi")
    return SpaceConfig("box", dim, bounds[0], bounds[1])


def _read_group(r: _Reader) -> GroupConfig:
    kind = r.choice("group", "kind", GROUP_KINDS, "cyclic")
    g = GroupConfig(kind)
    if kind == "cyclic":
        g.order = r.get("group", "order", int, required=True)
        if not 1 <= g.order <= MAX_ORDER:
            raise r.error("group", "order", f"must lie in [1, {MAX_ORDER}]")
    elif kind == "table":
        table = r.get("group", "cayley", json.loads, required=True)
        try:
            group = FiniteGroup.from_table(np.asarray(table, dtype=int))
        except (ValueError, TypeError) as exc:
            raise r.error("group", "cayley", str(exc)) from None
        g.table = group.cayley.tolist()
        g.order = group.n
    elif kind == "word_ball":
        g.max_len = r.get("group", "max_len", int, required=True)
        if not 0 <= g.max_len <= 64:
            raise r.error("group", "max_len", "must lie in [0, 64]")
        g.order = 0
    else:
        g.order = 1
    for key in ("order", "cayley", "max_len"):
        used = {"cyclic": ("order",), "table": ("cayley",), "word_ball": ("max_len",), "single": ()}[kind]
        if r.has("group", key) and key not in used:
            raise r.error("group", key, f"not used by group kind {kind!r}")
    return g


def _read_iteration(r: _Reader, space: SpaceConfig, group: GroupConfig) -> IterationSettings:
    mode = r.choice("iteration", "mode", MODES, "theorem1")
    it = IterationSettings(mode)
    it.x1 = r.get("iteration", "x1", _floats, required=True)
    want = 1 if space.kind == "circle" else space.dim
    if len(it.x1) != want:
        raise r.error("iteration", "x1", f"has {len(it.x1)} entries, expected {want}")
    it.tol = r.get("iteration", "tol", float, ITER_TOL)
    if not (it.tol > 0 and math.isfinite(it.tol)):
        raise r.error("iteration", "tol", f"must be a positive number, got {it.tol!r}")
    it.max_iter = r.get("iteration", "max_iter", int, MAX_ITER)
    if not 1 <= it.max_iter <= 100_000:
        raise r.error("iteration", "max_iter", "must lie in [1, 100000]")
    it.lam = r.get("iteration", "lambda", float, 1.0)
    if not it.lam >= 1:
        raise r.error("iteration", "lambda", f"must be >= 1, got {it.lam!r}")
    if mode == "theorem1" and it.lam != 1:
        raise r.error("iteration", "lambda", "theorem1 runs on a hyperconvex space: lambda must be 1")
    if mode == "theorem1" and space.kind == "circle":
        raise r.error("iteration", "mode", "theorem1 needs a box space; use theorem2 on the circle")
    default_expect = "ok" if mode in ("word_ball", "fixed_set") else "converged"
    it.expect = r.choice("iteration", "expect", EXPECTS, default_expect)
    if (it.expect == "ok") != (mode in ("word_ball", "fixed_set")):
        raise r.error("iteration", "expect", f"{it.expect!r} does not fit mode {mode!r}")
    it.min_residual = r.get("iteration", "min_residual", parse_angle, None)
    it.growth_rate = r.get("iteration", "growth_rate", float, 0.0)
    it.min_distance = r.get("iteration", "min_distance", float, None)
    for key, modes in (("growth_rate", ("word_ball",)), ("min_distance", ("fixed_set",)),
                       ("min_residual", ("theorem1", "theorem2", "theorem3"))):
        if r.has("iteration", key) and mode not in modes:
            raise r.error("iteration", key, f"only used with mode {' or '.join(modes)}")
    pairs = {"word_ball": ("word_ball",), "fixed_set": ("single",), "theorem3": ("cyclic", "table", "single")}
    allowed = pairs.get(mode, ("cyclic", "table"))
    if group.kind not in allowed:
        raise r.error("iteration", "mode", f"mode {mode!r} needs group kind {' or '.join(allowed)}, got {group.kind!r}")
    if mode == "theorem3" and group.kind != "single" and group.order != 2:
        raise r.error("iteration", "mode", "theorem3 needs a group of order 2 (an involution)")
    if mode == "fixed_set" and space.kind != "box":
        raise r.error("iteration", "mode", "fixed_set is available on box spaces only")
    return it


def _read_maps(r: _Reader, space: SpaceConfig, group: GroupConfig, it: IterationSettings) -> dict[str, dict]:
    keys = list(r.p.options("maps"))
    specs: dict[str, dict] = {}
    for key in keys:
        spec = r.get("maps", key, json.loads)
        try:
            build_map(spec, space)
        except (ValueError, KeyError, TypeError) as exc:
            msg = f"missing parameter {exc}" if isinstance(exc, KeyError) else str(exc)
            raise r.error("maps", key, msg) from None
        specs[key] = spec
    if group.kind == "cyclic" and "generator" in specs:
        if len(specs) != 1:
            raise r.error("maps", None, "give either 'generator' or m0..m{n-1}, not both")
        return specs
    if group.kind == "word_ball":
        want = [f"g{i}" for i in range(len(keys))]
        if not keys or keys != want:
            raise r.error("maps", None, f"word_ball needs generators g0, g1, ... in order, got {', '.join(keys) or 'none'}")
        return specs
    if group.kind == "single":
        if keys != ["map"]:
            raise r.error("maps", None, f"group kind 'single' needs exactly one key 'map', got {', '.join(keys) or 'none'}")
        return specs
    want = [f"m{i}" for i in range(group.order)]
    if sorted(keys, key=_key_order) != want:
        raise r.error("maps", None, f"group order is {group.order} but {len(keys)} maps were given "
                                    f"({', '.join(keys) or 'none'}); expected {want[0]}..{want[-1]}")
    return {k: specs[k] for k in want}


def _key_order(k: str):
    m = re.fullmatch(r"m(\d+)", k)
    return (0, int(m.group(1))) if m else (1, k)


# -- echo -------------------------------------------------------------------


def echo_config(cfg: ScenarioConfig) -> str:
    """The config with every default written out; parses back to an equal config."""
    out = ["[space]", f"kind = {cfg.space.kind}"]
    if cfg.space.kind == "box":
        out += [f"dim = {cfg.space.dim}", f"lo = {_fmt_vec(cfg.space.lo)}", f"hi = {_fmt_vec(cfg.space.hi)}"]
    out += ["", "[group]", f"kind = {cfg.group.kind}"]
    if cfg.group.kind == "cyclic":
        out.append(f"order = {cfg.group.order}")
    elif cfg.group.kind == "table":
        out.append(f"cayley = {json.dumps(cfg.group.table)}")
    elif cfg.group.kind == "word_ball":
        out.append(f"max_len = {cfg.group.max_len}")
    out += ["", "[maps]"] + [f"{k} = {json.dumps(v)}" for k, v in cfg.maps.items()]
    it = cfg.iteration
    out += ["", "[iteration]", f"mode = {it.mode}", f"x1 = {_fmt_vec(it.x1)}", f"tol = {_fmt_num(it.tol)}",
            f"max_iter = {it.max_iter}", f"lambda = {_fmt_num(it.lam)}", f"expect = {it.expect}"]
    if it.min_residual is not None:
        out.append(f"min_residual = {_fmt_num(it.min_residual)}")
    if it.mode == "word_ball":
        out.append(f"growth_rate = {_fmt_num(it.growth_rate)}")
    if it.min_distance is not None:
        out.append(f"min_distance = {_fmt_num(it.min_distance)}")
    out += ["", "[sampling]", f"seed = {cfg.seed}", f"samples = {cfg.samples}",
            "", "[output]", f"name = {cfg.name}"]
    if cfg.description:
        out.append(f"description = {cfg.description}")
    if cfg.out_dir:
        out.append(f"dir = {cfg.out_dir}")
    return "\n".join(out) + "\n"


# -- building ---------------------------------------------------------------


def build_domain(cfg: ScenarioConfig):
    if cfg.space.kind == "circle":
        return CircleDomain()
    return BoxDomain(np.array(cfg.space.lo), np.array(cfg.space.hi))


def build_maps(cfg: ScenarioConfig) -> dict[str, Mapping]:
    return {k: build_map(v, cfg.space) for k, v in cfg.maps.items()}


def build_action(cfg: ScenarioConfig) -> Action:
    """The finite group action of a cyclic or table scenario."""
    domain = build_domain(cfg)
    maps = build_maps(cfg)
    g = cfg.group
    if g.kind == "cyclic" and "generator" in maps:
        return cyclic_action(maps["generator"], g.order, domain, cfg.name)
    if g.kind == "cyclic":
        return Action(cyclic(g.order), tuple(maps.values()), domain, cfg.name)
    if g.kind == "table":
        group = FiniteGroup.from_table(np.asarray(g.table))
        return Action(group, tuple(maps.values()), domain, cfg.name)
    raise ValueError(f"group kind {g.kind!r} does not define a finite action")
