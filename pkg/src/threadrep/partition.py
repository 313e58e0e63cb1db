"""Valid partitions, samples and the sampled bound quiver.

A partition keeps every vertex as a singleton and cuts each thread into
finitely many interval cells.  Replacing every threaded arrow by the chain
``s(a) -> a.1 -> ... -> a.k -> t(a)`` of its cells gives the chain quiver;
the sampled bound quiver is the part of it that survives the completed
ideal, together with the minimal dead paths as zero relations.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidDimVec, MalformedPartition, NotHomFinite
from .ideal import IdealSpec
from .order import (SRC, TGT, Inner, ThreadInterval, Vertex,
                    cell_index, cell_markers, cells_from_markers,
                    format_interval, format_rational, interval_markers,
                    interval_to_json, pos_in)
from .pathcat import DEFAULT_CAP, PathLike


def cell_vertex(arrow, i):
    return f"{arrow}.{i}"


def chain_arrow(arrow, j):
    return f"{arrow}:{j}"


class ValidPartition:
    """Singleton vertices plus finitely many interval cells per thread."""

    def __init__(self, quiver, cells=None):
        self.quiver = quiver
        cells = cells or {}
        self._markers = {}
        for a in quiver.threaded_arrows():
            given = cells.get(a.name)
            if given is None:
                self._markers[a.name] = frozenset()
                continue
            for c in given:
                if c.arrow != a.name:
                    raise MalformedPartition(f"cell {c} does not lie on {a.name}")
            self._markers[a.name] = cell_markers(list(given), a.model)
        for name in cells:
            if not quiver.arrow(name).threaded and cells[name]:
                raise MalformedPartition(f"arrow {name} has an empty thread")
        self._cells = {name: cells_from_markers(name, quiver.arrow(name).model, m)
                       for name, m in self._markers.items()}

    @classmethod
    def from_markers(cls, quiver, markers):
        cells = {}
        for a in quiver.threaded_arrows():
            cells[a.name] = cells_from_markers(a.name, a.model, markers.get(a.name, ()))
        return cls(quiver, cells)

    @classmethod
    def coarsest(cls, quiver):
        return cls(quiver)

    @classmethod
    def uniform(cls, quiver, depth):
        """``depth`` half-open cells on every thread (fewer on short finite threads)."""
        markers = {}
        for a in quiver.threaded_arrows():
            markers[a.name] = {(c, "+") for c in _uniform_cuts(a.model, depth)}
        return cls.from_markers(quiver, markers)

    def markers(self, arrow):
        return self._markers.get(arrow, frozenset())

    def all_markers(self):
        return dict(self._markers)

    def cells(self, arrow):
        return list(self._cells.get(arrow, []))

    def arrows(self):
        return list(self._cells)

    def cell_position(self, point):
        """1-based index of the cell holding an inner point."""
        model = self.quiver.arrow(point.arrow).model
        i = cell_index(self._cells[point.arrow], point.coord, model)
        if i is None:
            raise MalformedPartition(f"{point} lies in no cell")
        return i + 1

    def cell_of(self, point):
        return self._cells[point.arrow][self.cell_position(point) - 1]

    def vertex_of(self, point):
        """Name of the chain vertex holding a point."""
        if isinstance(point, Vertex):
            return point.name
        return cell_vertex(point.arrow, self.cell_position(point))

    def with_markers(self, extra):
        merged = {name: set(m) | set(extra.get(name, ())) for name, m in self._markers.items()}
        return ValidPartition.from_markers(self.quiver, merged)

    def refine(self, other):
        return self.with_markers(other.all_markers())

    def refines(self, other):
        return all(other.markers(a) <= self.markers(a) for a in self._markers)

    def with_interval(self, interval):
        model = self.quiver.arrow(interval.arrow).model
        return self.with_markers({interval.arrow: interval_markers(interval, model)})

    def __eq__(self, other):
        return isinstance(other, ValidPartition) and self._markers == other._markers

    def __hash__(self):
        return hash(frozenset(self._markers.items()))

    def cell_count(self):
        return len(self.quiver.vertices) + sum(len(c) for c in self._cells.values())

    def labels(self):
        out = [f"{{{v}}}" for v in self.quiver.vertices]
        for name, cells in self._cells.items():
            model = self.quiver.arrow(name).model
            out.extend(f"{name}:{format_interval(c, model)}" for c in cells)
        return out

    def to_json(self):
        return {name: [interval_to_json(c) for c in cells] for name, cells in self._cells.items()}


def _uniform_cuts(model, depth):
    if depth <= 1:
        return []
    if model.kind == "finite":
        k = min(depth, model.n)
        return sorted({(model.n * i) // k for i in range(1, k)} - {0})
    lo, hi = model.lo, model.hi
    if lo is not None and hi is not None:
        return [lo + (hi - lo) * Fraction(i, depth) for i in range(1, depth)]
    if lo is not None:
        return [lo + i for i in range(1, depth)]
    if hi is not None:
        return [hi - depth + i for i in range(1, depth)]
    return [Fraction(i - depth // 2) for i in range(1, depth)]


def cell_midpoint(cell, model):
    """Deterministic representative of a cell."""
    if model.kind == "finite":
        return (cell.lo.pos + cell.hi.pos) // 2
    if cell.lo.pos == cell.hi.pos:
        return cell.lo.pos
    lo = model.value(cell.lo.pos)
    hi = model.value(cell.hi.pos)
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def cell_witnesses(cell, model):
    """Points near the ends and in the middle of a cell."""
    if model.kind == "finite":
        return sorted({cell.lo.pos, (cell.lo.pos + cell.hi.pos) // 2, cell.hi.pos})
    if cell.lo.pos == cell.hi.pos:
        return [cell.lo.pos]
    lo, hi = model.value(cell.lo.pos), model.value(cell.hi.pos)
    if lo is None and hi is None:
        return [Fraction(-1), Fraction(0), Fraction(1)]
    if lo is None:
        lo = hi - 2
    if hi is None:
        hi = lo + 2
    pts = [lo + (hi - lo) / 10, (lo + hi) / 2, lo + 9 * (hi - lo) / 10]
    if cell.lo.closed and cell.lo.pos != SRC:
        pts.insert(0, cell.lo.pos)
    if cell.hi.closed and cell.hi.pos != TGT:
        pts.append(cell.hi.pos)
    return pts


@dataclass(frozen=True)
class Sample:
    partition: ValidPartition
    points: tuple

    def point(self, name):
        return dict(self.points)[name]

    def as_dict(self):
        return dict(self.points)


def sample(partition):
    q = partition.quiver
    pts = [(v, Vertex(v)) for v in q.vertices]
    for name in partition.arrows():
        model = q.arrow(name).model
        for i, c in enumerate(partition.cells(name), 1):
            pts.append((cell_vertex(name, i), Inner(name, cell_midpoint(c, model))))
    return Sample(partition, tuple(pts))


# -- bound quivers -------------------------------------------------------------


class BoundQuiver:
    """A finite quiver with zero relations and linear relations.

    ``linear_relations`` holds triples (source, target, terms) with terms a
    tuple of (coefficient, path); coefficients are Fractions.
    """

    def __init__(self, vertices, arrows, zero_relations=(), linear_relations=()):
        self.vertices = tuple(vertices)
        self.arrows = dict(arrows)
        self.zero_relations = tuple(tuple(r) for r in zero_relations)
        self.linear_relations = tuple(linear_relations)
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for name, (s, t) in self.arrows.items():
            self._out[s].append(name)
            self._in[t].append(name)
        self._zero = set(self.zero_relations)
        self._zero_lengths = sorted({len(r) for r in self.zero_relations})

    def out_arrows(self, v):
        return self._out[v]

    def in_arrows(self, v):
        return self._in[v]

    def source(self, a):
        return self.arrows[a][0]

    def target(self, a):
        return self.arrows[a][1]

    def path_is_zero(self, path):
        path = tuple(path)
        for n in self._zero_lengths:
            for i in range(len(path) - n + 1):
                if path[i:i + n] in self._zero:
                    return True
        return False

    def live_paths(self, u, cap=256):
        """All nonzero paths starting at u (as arrow tuples), the trivial one first."""
        out = [()]
        stack = [(u, ())]
        while stack:
            v, path = stack.pop()
            for a in reversed(self._out[v]):
                p = path + (a,)
                if self.path_is_zero(p):
                    continue
                if len(p) > cap:
                    raise NotHomFinite(f"nonzero path longer than {cap} from {u}", witness=p)
                out.append(p)
                stack.append((self.target(a), p))
        return out

    def path_end(self, u, path):
        return self.target(path[-1]) if path else u

    def underlying_edges(self):
        return [(s, t) for s, t in self.arrows.values()]

    def opposite(self):
        arrows = {a: (t, s) for a, (s, t) in self.arrows.items()}
        zero = [tuple(reversed(r)) for r in self.zero_relations]
        lin = [(t, s, tuple((c, tuple(reversed(p))) for c, p in terms))
               for s, t, terms in self.linear_relations]
        return BoundQuiver(self.vertices, arrows, zero, lin)

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [{"name": a, "source": s, "target": t} for a, (s, t) in self.arrows.items()],
            "zero_relations": [list(r) for r in self.zero_relations],
            "linear_relations": [{"source": s, "target": t,
                                  "terms": [[format_rational(c), list(p)] for c, p in terms]}
                                 for s, t, terms in self.linear_relations],
        }

    def __eq__(self, other):
        return (isinstance(other, BoundQuiver) and self.vertices == other.vertices
                and self.arrows == other.arrows and set(self.zero_relations) == set(other.zero_relations)
                and self.linear_relations == other.linear_relations)

    def __hash__(self):
        return hash((self.vertices, tuple(self.arrows.items())))


def chain_quiver(quiver, partition):
    """The quiver with each threaded arrow replaced by the chain of its cells."""
    vertices = list(quiver.vertices)
    arrows = {}
    for a in quiver.arrows:
        if not a.threaded:
            arrows[a.name] = (a.source, a.target)
            continue
        k = len(partition.cells(a.name))
        names = [a.source] + [cell_vertex(a.name, i) for i in range(1, k + 1)] + [a.target]
        vertices.extend(names[1:-1])
        for j in range(k + 1):
            arrows[chain_arrow(a.name, j)] = (names[j], names[j + 1])
    return BoundQuiver(vertices, arrows)


def chain_path_of_qpath(quiver, partition, qpath):
    out = []
    for name in qpath:
        a = quiver.arrow(name)
        if not a.threaded:
            out.append(name)
        else:
            k = len(partition.cells(name))
            out.extend(chain_arrow(name, j) for j in range(k + 1))
    return tuple(out)


def chain_path_of(quiver, partition, m):
    """Chain path from the cell of m's source to the cell of m's target."""
    x, y = m.source, m.target
    if m.is_pure:
        i, j = partition.cell_position(x), partition.cell_position(y)
        return tuple(chain_arrow(x.arrow, t) for t in range(i, j))
    out = []
    if isinstance(x, Inner):
        i = partition.cell_position(x)
        k = len(partition.cells(x.arrow))
        out.extend(chain_arrow(x.arrow, t) for t in range(i, k + 1))
    out.extend(chain_path_of_qpath(quiver, partition, m.path))
    if isinstance(y, Inner):
        j = partition.cell_position(y)
        out.extend(chain_arrow(y.arrow, t) for t in range(0, j))
    return tuple(out)


def _parse_chain_arrow(name):
    if ":" in name:
        base, j = name.rsplit(":", 1)
        return base, int(j)
    return name, None


class SampledBoundQuiver:
    """Chain quiver of a partition, pruned and bound by the completed ideal."""

    def __init__(self, quiver, ideal, partition, smp, cap=DEFAULT_CAP):
        self.quiver = quiver
        self.ideal = ideal
        self.partition = partition
        self.sample = smp
        self.points = smp.as_dict()
        self.chain = chain_quiver(quiver, partition)
        self.cap = cap
        self._build()

    def cell(self, v):
        """The cell (ThreadInterval) of a chain vertex, or the Vertex itself."""
        if v in self.quiver.vertices:
            return Vertex(v)
        name, i = v.rsplit(".", 1)
        return self.partition.cells(name)[int(i) - 1]

    def morphism(self, u, path):
        """The basis morphism between sample points traced by a chain path."""
        x = self.points[u]
        w = self.chain.path_end(u, path)
        y = self.points[w]
        qpath = []
        crossed = False
        run = []
        for a in path:
            base, j = _parse_chain_arrow(a)
            if j is None:
                qpath.append(base)
                crossed = True
                run = []
                continue
            run.append(j)
            k = len(self.partition.cells(base))
            if j == k:
                crossed = True
                if run[0] == 0:
                    qpath.append(base)
                run = []
        if not crossed and isinstance(x, Inner) and isinstance(y, Inner):
            return PathLike(x, y, None)
        return PathLike(x, y, tuple(qpath))

    def is_dead(self, u, path):
        m = self.morphism(u, path)
        w = self.chain.path_end(u, path)
        lo = self.cell(u).lo if isinstance(self.points[u], Inner) else None
        hi = self.cell(w).hi if isinstance(self.points[w], Inner) else None
        return self.ideal.monomial_dead(self.quiver, m, lo, hi)

    def _build(self):
        ch = self.chain
        self.dead_vertices = {v for v in ch.vertices if isinstance(self.points[v], Inner) and self.is_dead(v, ())}
        self.dead_arrows = set()
        relations = []
        limit = self.cap + len(ch.arrows)
        for u in ch.vertices:
            if u in self.dead_vertices:
                continue
            stack = [(u, ())]
            while stack:
                v, path = stack.pop()
                for a in ch.out_arrows(v):
                    t = ch.target(a)
                    p = path + (a,)
                    if t in self.dead_vertices or a in self.dead_arrows:
                        continue
                    if self.is_dead(u, p):
                        if len(p) == 1:
                            self.dead_arrows.add(a)
                        elif not self.is_dead(ch.target(p[0]), p[1:]):
                            relations.append(p)
                        continue
                    if len(p) > limit:
                        raise NotHomFinite(f"live sampled path longer than {limit}", witness=p)
                    stack.append((t, p))
        live_v = [v for v in ch.vertices if v not in self.dead_vertices]
        live_a = {a: st for a, st in ch.arrows.items()
                  if a not in self.dead_arrows and st[0] not in self.dead_vertices and st[1] not in self.dead_vertices}
        relations = [r for r in relations if all(a in live_a for a in r)]
        linear = []
        for r in self.ideal.linear_relations:
            terms = []
            for c, m in r.terms:
                p = chain_path_of_qpath(self.quiver, self.partition, m.path)
                if all(a in live_a for a in p) and not any(rel == p[i:i + len(rel)] for rel in relations for i in range(len(p))):
                    terms.append((c, p))
            if terms:
                linear.append((r.source.name, r.target.name, tuple(terms)))
        self.bound = BoundQuiver(live_v, live_a, sorted(set(relations)), linear)

    def vertex_label(self, v):
        c = self.cell(v)
        if isinstance(c, Vertex):
            return v
        return f"{v}={format_interval(c, self.quiver.arrow(c.arrow).model)}"

    def to_json(self):
        out = self.bound.to_json()
        out["cells"] = {v: self.vertex_label(v) for v in self.bound.vertices}
        out["dead_vertices"] = sorted(self.dead_vertices)
        out["dead_arrows"] = sorted(self.dead_arrows)
        return out


def sampled_bound_quiver(quiver, ideal, partition, smp=None, cap=DEFAULT_CAP):
    ideal = ideal or IdealSpec()
    smp = smp or sample(partition)
    return SampledBoundQuiver(quiver, ideal, partition, smp, cap)


# -- dimension vectors ---------------------------------------------------------------


@dataclass
class DimensionVector:
    """Vertex dimensions plus piecewise-constant dimensions on each thread."""

    quiver: object
    vertices: dict
    pieces: dict

    def validate(self):
        for a in self.quiver.threaded_arrows():
            ps = self.pieces.get(a.name)
            if not ps:
                raise InvalidDimVec(f"thread {a.name} has no dimension data")
            try:
                cell_markers([iv for iv, _ in ps], a.model)
            except MalformedPartition as exc:
                raise InvalidDimVec(str(exc)) from None
            for _, d in ps:
                if d < 0:
                    raise InvalidDimVec("negative dimension")
        for v in self.quiver.vertices:
            if self.vertices.get(v, 0) < 0:
                raise InvalidDimVec("negative dimension")

    def at(self, point):
        if isinstance(point, Vertex):
            return self.vertices.get(point.name, 0)
        model = self.quiver.arrow(point.arrow).model
        for iv, d in self.pieces[point.arrow]:
            if pos_in(iv, point.coord, model):
                return d
        raise InvalidDimVec(f"no dimension at {point}")

    def merged(self):
        out = {}
        for name, ps in self.pieces.items():
            model = self.quiver.arrow(name).model
            ordered = sorted(ps, key=lambda t: t[0].key(model))
            runs = []
            for iv, d in ordered:
                if runs and runs[-1][1] == d:
                    runs[-1] = (ThreadInterval(name, runs[-1][0].lo, iv.hi), d)
                else:
                    runs.append((iv, d))
            out[name] = runs
        return out

    def __eq__(self, other):
        if not isinstance(other, DimensionVector):
            return NotImplemented
        mine, theirs = self.merged(), other.merged()
        vs = set(self.vertices) | set(other.vertices)
        return (all(self.vertices.get(v, 0) == other.vertices.get(v, 0) for v in vs)
                and mine == theirs)


def partition_of_dimvec(d):
    d.validate()
    cells = {name: [iv for iv, _ in runs] for name, runs in d.merged().items()}
    return ValidPartition(d.quiver, cells)
