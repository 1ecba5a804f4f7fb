"""Flat-file JSON schemas for groups, flows, ambits, relations, lattices,
and structured scenarios.

Schemas (one object per file):
  group     {"kind": "permutation", "degree": n, "generators": [[...], ...]}
            {"kind": "table", "mul": [[...], ...]}
            {"kind": "named", "name": "cyclic|symmetric|dihedral|affine", ...params}
  flow      {"group": <group>, "points": n,
             "action": "natural" | "regular" | {"generator_images": [[...], ...]}}
            {"transformations": [[...], ...]}     (non-invertible stand-ins)
  ambit     a flow object plus "basepoint": int
  relation  {"points": n, "classes": [[...], ...]}
  lattice   {"ground": "G|X|GxX|X2|X2x2|XxG", "size": n,
             "sets": [[...], ...] | "discrete", "auto_complete": bool}
  scenario  {"flow": <flow>, "relation": <relation>,
             "lattices": {"G": <lattice sets or "discrete">, "X": ..., ...}}

Product-space indices are row-major. parse(serialize(x)) returns an equal
instance for every kind.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import algebra, flows, relations, structured
from .caps import DEFAULT_CAPS, Caps
from .errors import ElliskitError, NotAnAction, ParseError, ValidationError


@dataclass(frozen=True)
class InstanceFile:
    kind: str
    value: object
    raw: dict


def _canonical(obj) -> dict:
    return json.loads(json.dumps(obj, sort_keys=True))


def detect_kind(data: dict) -> str:
    if not isinstance(data, dict):
        raise ParseError("<data>", "top-level JSON object expected")
    if "ground" in data:
        return "lattice"
    if "lattices" in data or ("flow" in data and "relation" in data):
        return "scenario"
    if "basepoint" in data:
        return "ambit"
    if "transformations" in data or "group" in data:
        return "flow"
    if "classes" in data and "points" in data:
        return "relation"
    if data.get("kind") in ("permutation", "table", "named"):
        return "group"
    raise ParseError("<data>", "unrecognized instance schema")


def build_group(data: dict, caps: Caps = DEFAULT_CAPS) -> algebra.FiniteGroup:
    kind = data.get("kind")
    if kind == "permutation":
        return algebra.group_from_permutations(int(data["degree"]),
                                               data["generators"], caps=caps)
    if kind == "table":
        return algebra.group_from_table(data["mul"], caps=caps)
    if kind == "named":
        params = {k: v for k, v in data.items() if k not in ("kind", "name")}
        return algebra.named_group(data["name"], caps=caps, **params)
    raise ParseError("<group>", f"unknown group kind {kind!r}")


def _flow_from_generator_images(G: algebra.FiniteGroup, points: int, images,
                                caps: Caps) -> flows.Flow:
    """Extend maps given on the group's generators to every element by
    following words; inconsistencies mean the maps do not define an action."""
    gens = G.gens or (G.identity,)
    if len(images) != len(gens):
        raise ParseError("<flow>", f"need one generator image per generator "
                                   f"({len(gens)} expected)")
    maps = {G.identity: tuple(range(points))}
    images = [tuple(int(v) for v in m) for m in images]
    frontier = [G.identity]
    while frontier:
        new = []
        for g in frontier:
            for gi, gen in enumerate(gens):
                h = G.mul[gen][g]
                composed = tuple(images[gi][v] for v in maps[g])
                if h in maps:
                    if maps[h] != composed:
                        raise NotAnAction(gen, g, -1)
                else:
                    maps[h] = composed
                    new.append(h)
        frontier = new
    action = [maps[g] for g in G.elements()]
    return flows.make_flow(G, points, action, caps=caps)


def build_flow(data: dict, caps: Caps = DEFAULT_CAPS) -> flows.Flow:
    if "transformations" in data:
        return flows.transformation_flow(data["transformations"], caps=caps)
    G = build_group(data["group"], caps=caps)
    action = data.get("action", "natural")
    points = data.get("points")
    if action == "natural":
        f = flows.natural_flow(G)
    elif action == "regular":
        f = flows.regular_flow(G)
    elif isinstance(action, dict) and "generator_images" in action:
        if points is None:
            raise ParseError("<flow>", "explicit actions need a point count")
        f = _flow_from_generator_images(G, int(points), action["generator_images"],
                                        caps)
    else:
        raise ParseError("<flow>", f"unknown action form {action!r}")
    if points is not None and f.points != int(points):
        raise ParseError("<flow>", f"point count {points} disagrees with "
                                   f"action on {f.points} points")
    return f


def build_ambit(data: dict, caps: Caps = DEFAULT_CAPS) -> flows.Ambit:
    f = build_flow(data, caps=caps)
    return flows.make_ambit(f, int(data["basepoint"]))


def build_relation(data: dict) -> relations.EquivRelation:
    return relations.make_relation(int(data["points"]), data["classes"])


def build_lattice(data: dict, caps: Caps = DEFAULT_CAPS):
    ground = data["ground"]
    size = int(data["size"])
    sets = data.get("sets", [])
    if sets == "discrete":
        return structured.discrete_lattice(ground, size)
    return structured.make_lattice(ground, size, sets,
                                   auto_complete=bool(data.get("auto_complete")),
                                   caps=caps)


def build_scenario(data: dict, caps: Caps = DEFAULT_CAPS) -> structured.StructuredInstance:
    flow = build_flow(data["flow"], caps=caps)
    E = build_relation(data["relation"]).bind(flow)
    gn, n = flow.group.order, flow.points
    given = data.get("lattices", {})

    def lat_for(ground):
        entry = given.get(ground)
        if entry is None:
            return None
        if entry == "discrete":
            return structured.discrete_lattice(
                ground, structured.ground_size(ground, gn, n))
        body = dict(entry)
        body.setdefault("ground", ground)
        body.setdefault("size", structured.ground_size(ground, gn, n))
        return build_lattice(body, caps=caps)

    lat_g = lat_for("G") or structured.discrete_lattice("G", gn)
    lat_x = lat_for("X") or structured.discrete_lattice("X", n)
    lats = structured.default_lattices(flow, lat_g, lat_x, caps=caps)
    for ground in ("GxX", "X2", "X2x2", "XxG"):
        override = lat_for(ground)
        if override is not None:
            lats[ground] = override
    # recompute the fourth power if only the pair lattice was overridden
    if lat_for("X2") is not None and lat_for("X2x2") is None:
        lats["X2x2"] = structured.product_lattice(lats["X2"], lats["X2"], caps=caps)
    return structured.StructuredInstance(flow, E, lats,
                                         name=data.get("name", ""))


_BUILDERS = {
    "group": lambda d, caps: build_group(d, caps),
    "flow": lambda d, caps: build_flow(d, caps),
    "ambit": lambda d, caps: build_ambit(d, caps),
    "relation": lambda d, caps: build_relation(d),
    "lattice": lambda d, caps: build_lattice(d, caps),
    "scenario": lambda d, caps: build_scenario(d, caps),
}


def parse_obj(data: dict, caps: Caps = DEFAULT_CAPS, origin="<data>") -> InstanceFile:
    kind = detect_kind(data)
    try:
        value = _BUILDERS[kind](data, caps)
    except ElliskitError as exc:
        raise ValidationError(origin, exc) from exc
    return InstanceFile(kind, value, _canonical(data))


def parse_instance(path, caps: Caps = DEFAULT_CAPS) -> InstanceFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(path), str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), f"line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(str(path), "top-level JSON object expected")
    return parse_obj(data, caps=caps, origin=str(path))


def serialize_instance(inst: InstanceFile) -> str:
    return json.dumps(inst.raw, sort_keys=True, indent=2) + "\n"
