"""Project documents: one JSON file holding a thread quiver, an ideal, points and modules.

Rationals are written as strings "p/q".  Positions at the ends of a thread
are "src" and "tgt".
"""

import json
import os
from dataclasses import dataclass, field as dc_field

from .errors import ParseError
from .exactla import Matrix, field_from_spec
from .ideal import Gap, IdealSpec, QuadI, QuadII, Rect, Relation
from .order import (SRC, TGT, Inner, OrderModel, Vertex, format_rational,
                    interval_to_json, make_interval, parse_rational)
from .partition import ValidPartition, sample, sampled_bound_quiver
from .pathcat import ThreadQuiver, make_pathlike
from .rep import FiniteQuiverRep, PwfRep, direct_sum, interval_module, simple_module

FIELD_ENV = "THREADREP_FIELD"


@dataclass
class FiniteModule:
    """A representation of the sampled bound quiver of a partition, ready to induce."""

    partition: ValidPartition
    rep: FiniteQuiverRep
    sbq: object


@dataclass
class Document:
    field: object
    quiver: ThreadQuiver
    ideal: IdealSpec
    points: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    finite: dict = dc_field(default_factory=dict)
    raw: dict = dc_field(default_factory=dict)

    def point(self, name):
        if name in self.points:
            return self.points[name]
        return parse_point(self.quiver, name)

    def module(self, name=None):
        if name is None:
            if not self.modules:
                raise ParseError("the document has no modules")
            name = next(iter(self.modules))
        try:
            return self.modules[name]
        except KeyError:
            raise ParseError(f"unknown module {name}") from None


def _fail(msg):
    raise ParseError(msg)


def parse_order(spec):
    if spec in ("empty", None) or spec == {"empty": None}:
        return OrderModel.empty()
    if isinstance(spec, dict):
        if "finite" in spec:
            return OrderModel.finite(int(spec["finite"]))
        if "dense" in spec:
            lo, hi = spec["dense"]
            return OrderModel.dense(lo, hi)
        if "empty" in spec:
            return OrderModel.empty()
    _fail(f"bad order model {spec!r}")


def parse_quiver(spec):
    try:
        vertices = [str(v) for v in spec["vertices"]]
        arrows = [(a["name"], a["source"], a["target"], parse_order(a.get("order", "empty")))
                  for a in spec["arrows"]]
    except (KeyError, TypeError) as exc:
        _fail(f"bad quiver: {exc}")
    return ThreadQuiver(vertices, arrows)


def _coord(model, value):
    if value in (SRC, TGT):
        return value
    if model.kind == "finite":
        return int(value)
    return parse_rational(value)


def parse_point(quiver, spec):
    """A vertex name, "arrow:coord" or {"arrow": .., "at": ..} / {"vertex": ..}."""
    if isinstance(spec, str):
        if spec in quiver.vertices:
            return Vertex(spec)
        if ":" in spec:
            arrow, at = spec.rsplit(":", 1)
            return quiver.check_point(Inner(arrow, _coord(quiver.arrow(arrow).model, at)))
        _fail(f"unknown point {spec!r}")
    if isinstance(spec, dict):
        if "vertex" in spec:
            return quiver.check_point(Vertex(spec["vertex"]))
        if "arrow" in spec:
            model = quiver.arrow(spec["arrow"]).model
            return quiver.check_point(Inner(spec["arrow"], _coord(model, spec["at"])))
    _fail(f"bad point {spec!r}")


def parse_interval(quiver, spec):
    try:
        a = quiver.arrow(spec["arrow"])
        lo, hi = spec["lo"], spec["hi"]
        return make_interval(a, (_coord(a.model, lo[0]), bool(lo[1])), (_coord(a.model, hi[0]), bool(hi[1])))
    except (KeyError, TypeError, IndexError) as exc:
        _fail(f"bad interval {spec!r}: {exc}")


def parse_ideal(quiver, spec):
    if not spec:
        return IdealSpec()
    fams = []
    for f in spec.get("families", []):
        (kind, body), = f.items()
        if kind == "gap":
            fams.append(Gap(body["arrow"], parse_rational(body["c"])))
        elif kind == "quad1":
            fams.append(QuadI(body["incoming"], body["outgoing"]))
        elif kind == "quad2":
            model = quiver.arrow(body["arrow"]).model
            fams.append(QuadII(body["arrow"], _coord(model, body["at"])))
        elif kind == "rect":
            fams.append(Rect(body["source_arrow"], tuple(body.get("path", ())), body["target_arrow"],
                             parse_interval(quiver, body["xs"]), parse_interval(quiver, body["ys"])))
        else:
            _fail(f"unknown family {kind}")
    rels = []
    for r in spec.get("relations", []):
        x, y = parse_point(quiver, r["source"]), parse_point(quiver, r["target"])
        terms = []
        for t in r["terms"]:
            path = t.get("path")
            m = make_pathlike(quiver, x, y, tuple(path) if path is not None else None)
            terms.append((parse_rational(t.get("coeff", "1")), m))
        rels.append(Relation(x, y, tuple(terms)))
    ideal = IdealSpec(rels, fams)
    try:
        ideal.validate(quiver)
    except ValueError as exc:
        _fail(f"bad ideal: {exc}")
    return ideal


def _matrix(field, rows, nrows, ncols):
    data = [[field.from_fraction(parse_rational(x)) for x in row] for row in rows]
    if not data:
        return Matrix.zero(field, nrows, ncols)
    return Matrix(field, data, ncols)


def parse_partition(quiver, spec):
    cells = {name: [parse_interval(quiver, dict(c, arrow=name)) for c in cs] for name, cs in (spec or {}).items()}
    return ValidPartition(quiver, cells)


def _core_data(field, bq, core):
    dims = {v: int(d) for v, d in core.get("dims", {}).items()}
    maps = {}
    for a, rows in core.get("maps", {}).items():
        if a not in bq.arrows:
            _fail(f"map for unknown arrow {a}")
        s, t = bq.arrows[a]
        maps[a] = _matrix(field, rows, dims.get(t, 0), dims.get(s, 0))
    return dims, maps


def parse_module(doc, spec, seen=()):
    q, f, ideal = doc.quiver, doc.field, doc.ideal
    if isinstance(spec, str):
        if spec in seen:
            _fail(f"module {spec} refers to itself")
        return parse_module(doc, doc.raw["modules"][spec], seen + (spec,))
    if not isinstance(spec, dict) or len(spec) != 1 and "noise" not in spec:
        _fail(f"bad module {spec!r}")
    if "interval" in spec:
        return interval_module(q, f, parse_interval(q, spec["interval"]), ideal, as_noise=bool(spec.get("noise")))
    if "simple" in spec:
        return simple_module(q, f, parse_point(q, spec["simple"]), ideal)
    if "sum" in spec:
        parts = [parse_module(doc, s, seen) for s in spec["sum"]]
        out = PwfRep.zero(q, f, ideal)
        for p in parts:
            out = direct_sum(out, p)
        return out
    if "pwf" in spec:
        body = spec["pwf"]
        part = parse_partition(q, body.get("partition"))
        zero = PwfRep(q, f, part, ideal=ideal)
        dims, maps = _core_data(f, zero.core.quiver, body.get("core", {}))
        noise = [(parse_interval(q, n["interval"]), int(n.get("mult", 1))) for n in body.get("noise", [])]
        return PwfRep(q, f, part, dims, maps, noise, ideal)
    _fail(f"unknown module kind {sorted(spec)}")


def parse_finite(doc, spec):
    part = parse_partition(doc.quiver, spec.get("partition"))
    sbq = sampled_bound_quiver(doc.quiver, doc.ideal, part, sample(part))
    dims, maps = _core_data(doc.field, sbq.bound, spec)
    return FiniteModule(part, FiniteQuiverRep(sbq.bound, doc.field, dims, maps), sbq)


def parse_document(data, field=None):
    """Build a Document from parsed JSON; THREADREP_FIELD overrides the document's field."""
    if not isinstance(data, dict) or "quiver" not in data:
        _fail("a document needs a quiver")
    spec = os.environ.get(FIELD_ENV) or data.get("field")
    try:
        fld = field or field_from_spec(spec)
    except ValueError as exc:
        _fail(f"bad field {spec!r}: {exc}")
    try:
        quiver = parse_quiver(data["quiver"])
        ideal = parse_ideal(quiver, data.get("ideal"))
        doc = Document(fld, quiver, ideal, raw=data)
        doc.points = {name: parse_point(quiver, p) for name, p in data.get("points", {}).items()}
        doc.modules = {name: parse_module(doc, m, (name,)) for name, m in data.get("modules", {}).items()}
        doc.finite = {name: parse_finite(doc, m) for name, m in data.get("finite", {}).items()}
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{type(exc).__name__}: {exc}") from exc
    return doc


def load(path, field=None):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc
    return parse_document(data, field)


# -- emitting -----------------------------------------------------------------------------


def module_to_spec(m):
    """Document form of a cell-constant representation."""
    return {"pwf": m.to_json()}


def point_to_json(p):
    if isinstance(p, Vertex):
        return p.name
    return {"arrow": p.arrow, "at": str(p.coord) if isinstance(p.coord, int) else format_rational(p.coord)}


def ideal_to_json(ideal):
    fams = []
    for f in ideal.families:
        if isinstance(f, Gap):
            fams.append({"gap": {"arrow": f.arrow, "c": format_rational(f.c)}})
        elif isinstance(f, QuadI):
            fams.append({"quad1": {"incoming": f.incoming, "outgoing": f.outgoing}})
        elif isinstance(f, QuadII):
            fams.append({"quad2": {"arrow": f.arrow, "at": format_rational(f.at)}})
        elif isinstance(f, Rect):
            fams.append({"rect": {"source_arrow": f.source_arrow, "path": list(f.path),
                                  "target_arrow": f.target_arrow,
                                  "xs": interval_to_json(f.xs), "ys": interval_to_json(f.ys)}})
    rels = []
    for r in ideal.relations:
        rels.append({"source": point_to_json(r.source), "target": point_to_json(r.target),
                     "terms": [{"coeff": format_rational(c), "path": None if m.path is None else list(m.path)}
                               for c, m in r.terms]})
    return {"relations": rels, "families": fams}


def dumps(obj):
    """Canonical JSON text (sorted keys, two-space indent)."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)
