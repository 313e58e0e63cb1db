"""Thread quivers and their path categories.

A morphism basis element ("path-like element") from x to y is either a
segment inside one thread (both ends inner points of the same arrow,
x <= y), or a path of the underlying quiver from the vertex where x exits
its thread to the vertex where y enters its thread.  A vertex exits and
enters at itself.  The loop rule is built in: composing the segment from
the source of an arrow up to x with the segment from x to its target gives
the arrow itself as a quiver path.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import EndpointMismatch, NotHomFinite
from .order import SRC, TGT, Inner, OrderModel, Vertex, format_rational

DEFAULT_CAP = 32


@dataclass(frozen=True)
class ArrowInfo:
    name: str
    source: str
    target: str
    model: OrderModel

    @property
    def threaded(self):
        return not self.model.is_empty


def _split_point(model):
    if model.kind == "finite":
        return (model.n + 1) // 2
    lo, hi = model.lo, model.hi
    if lo is not None and hi is not None:
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1
    if hi is not None:
        return hi - 1
    return Fraction(0)


class ThreadQuiver:
    """A finite quiver whose arrows carry order models.

    Loops with a nonempty thread are cut at an inner point that becomes a
    new vertex, turning the loop into a two-cycle.  ``rewrites`` records
    each cut as ``loop -> (first arrow, new vertex, second arrow)``.
    """

    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex")
        self._arrows = {}
        self.rewrites = {}
        extra_vertices = []
        for name, s, t, model in arrows:
            if s not in self.vertices or t not in self.vertices:
                raise ValueError(f"arrow {name} has an unknown endpoint")
            if name in self._arrows:
                raise ValueError(f"duplicate arrow {name}")
            if s == t and not model.is_empty:
                x = _split_point(model)
                mid = f"{name}@{format_rational(x)}"
                first, second = f"{name}'", f"{name}''"
                if model.kind == "finite":
                    m1, m2 = OrderModel.finite(x - 1), OrderModel.finite(model.n - x)
                else:
                    m1, m2 = OrderModel.dense(model.lo, x), OrderModel.dense(x, model.hi)
                extra_vertices.append(mid)
                self._arrows[first] = ArrowInfo(first, s, mid, m1)
                self._arrows[second] = ArrowInfo(second, mid, t, m2)
                self.rewrites[name] = (first, mid, second)
                continue
            self._arrows[name] = ArrowInfo(name, s, t, model)
        self.vertices = self.vertices + tuple(extra_vertices)
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in self._arrows.values():
            self._out[a.source].append(a.name)
            self._in[a.target].append(a.name)

    @property
    def arrows(self):
        return list(self._arrows.values())

    @property
    def arrow_names(self):
        return list(self._arrows)

    def arrow(self, name):
        try:
            return self._arrows[name]
        except KeyError:
            raise KeyError(f"unknown arrow {name}") from None

    def has_arrow(self, name):
        return name in self._arrows

    def out_arrows(self, v):
        return list(self._out[v])

    def in_arrows(self, v):
        return list(self._in[v])

    def threaded_arrows(self):
        return [a for a in self._arrows.values() if a.threaded]

    def check_point(self, p):
        if isinstance(p, Vertex):
            if p.name not in self.vertices:
                raise ValueError(f"unknown vertex {p.name}")
            return p
        a = self.arrow(p.arrow)
        pos = a.model.normalize(p.coord)
        if pos == SRC:
            return Vertex(a.source)
        if pos == TGT:
            return Vertex(a.target)
        return Inner(p.arrow, pos)

    def opposite(self):
        """The quiver with every arrow reversed and every thread mirrored."""
        arrows = []
        for a in self._arrows.values():
            arrows.append((a.name, a.target, a.source, mirror_model(a.model)))
        return ThreadQuiver(self.vertices, arrows)

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "source": a.source, "target": a.target,
                        "order": a.model.to_json()} for a in self._arrows.values()],
        }


def mirror_model(model):
    if model.kind == "dense":
        return OrderModel.dense(None if model.hi is None else -model.hi,
                                None if model.lo is None else -model.lo)
    return model


def mirror_pos(model, pos):
    if pos == SRC:
        return TGT
    if pos == TGT:
        return SRC
    if model.kind == "finite":
        return model.n + 1 - pos
    return -pos


def mirror_point(quiver, p):
    if isinstance(p, Vertex):
        return p
    return Inner(p.arrow, mirror_pos(quiver.arrow(p.arrow).model, p.coord))


def exit_vertex(quiver, p):
    if isinstance(p, Vertex):
        return p.name
    return quiver.arrow(p.arrow).target


def entry_vertex(quiver, p):
    if isinstance(p, Vertex):
        return p.name
    return quiver.arrow(p.arrow).source


@dataclass(frozen=True)
class PathLike:
    """Basis morphism from ``source`` to ``target``.

    ``path`` is None for a segment inside one thread, otherwise the tuple of
    quiver arrows traversed (in order of traversal).
    """

    source: object
    target: object
    path: object = None

    @property
    def is_pure(self):
        return self.path is None

    def is_identity(self):
        return self.source == self.target and (self.path == () or self.path is None)


def make_pathlike(quiver, x, y, path=None):
    x, y = quiver.check_point(x), quiver.check_point(y)
    if path is None:
        if _pure_possible(quiver, x, y):
            return PathLike(x, y, None)
        if x == y:
            return PathLike(x, y, ())
        found = _quiver_paths(quiver, exit_vertex(quiver, x), entry_vertex(quiver, y), 2)
        if len(found) != 1:
            raise EndpointMismatch(f"no unique path from {x} to {y}; give it explicitly")
        path = found[0]
    path = tuple(path)
    v = exit_vertex(quiver, x)
    for name in path:
        a = quiver.arrow(name)
        if a.source != v:
            raise EndpointMismatch(f"path does not continue at {v}")
        v = a.target
    if v != entry_vertex(quiver, y):
        raise EndpointMismatch("path does not reach the target thread")
    return PathLike(x, y, path)


def _quiver_paths(quiver, u, w, limit):
    """Up to ``limit`` quiver paths from u to w (shortest search, cycles cut)."""
    out = []
    stack = [(u, ())]
    while stack and len(out) < limit:
        v, path = stack.pop()
        if v == w:
            out.append(path)
        if len(path) > len(quiver.vertices) + 1:
            out.append(None)
            continue
        for name in quiver.out_arrows(v):
            stack.append((quiver.arrow(name).target, path + (name,)))
    return out


def identity(p):
    return PathLike(p, p, None if isinstance(p, Inner) else ())


def compose_basis(quiver, g, f):
    """g after f for basis elements; raises EndpointMismatch."""
    if f.target != g.source:
        raise EndpointMismatch(f"cannot compose: {f.target} != {g.source}")
    mid = f.target
    if isinstance(mid, Vertex):
        return PathLike(f.source, g.target, f.path + g.path)
    # mid is inner on some arrow
    if f.is_pure and g.is_pure:
        return PathLike(f.source, g.target, None)
    if f.is_pure:
        return PathLike(f.source, g.target, g.path)
    if g.is_pure:
        return PathLike(f.source, g.target, f.path)
    return PathLike(f.source, g.target, f.path + (mid.arrow,) + g.path)


@dataclass(frozen=True)
class Piece:
    """A stretch of a monomial inside the closure of one arrow."""

    arrow: str
    start: object
    end: object


def pieces(quiver, m):
    x, y = m.source, m.target
    if m.is_pure:
        return [Piece(x.arrow, x.coord, y.coord)]
    out = []
    if isinstance(x, Inner):
        out.append(Piece(x.arrow, x.coord, TGT))
    for name in m.path:
        out.append(Piece(name, SRC, TGT))
    if isinstance(y, Inner):
        out.append(Piece(y.arrow, SRC, y.coord))
    return out


def format_pathlike(quiver, m):
    def lab(p):
        if isinstance(p, Vertex):
            return p.name
        return format_rational(p.coord)

    if m.is_pure:
        if m.source == m.target:
            return f"e[{m.source}]"
        return f"η[{m.source.arrow}:{lab(m.target)}←{lab(m.source)}]"
    parts = []
    x, y = m.source, m.target
    if isinstance(y, Inner):
        parts.append(f"η[{y.arrow}:{lab(y)}←src]")
    if m.path:
        parts.append("p(" + "∘".join(reversed(m.path)) + ")")
    if isinstance(x, Inner):
        parts.append(f"η[{x.arrow}:tgt←{lab(x)}]")
    if not parts:
        return f"e[{x}]"
    return "·".join(parts)


class MorphismCombination:
    """Finite linear combination of basis morphisms with common endpoints."""

    def __init__(self, field, source, target, terms=None):
        self.field = field
        self.source = source
        self.target = target
        clean = {}
        for m, c in (terms or {}).items():
            if m.source != source or m.target != target:
                raise EndpointMismatch("summands must share endpoints")
            if not field.is_zero(c):
                clean[m] = c
        self.terms = clean

    @classmethod
    def basis(cls, field, m, coeff=None):
        return cls(field, m.source, m.target, {m: field.one if coeff is None else coeff})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise EndpointMismatch("cannot add morphisms with different endpoints")
        f = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = f.add(terms.get(m, f.zero), c)
        return MorphismCombination(f, self.source, self.target, terms)

    def scale(self, c):
        f = self.field
        return MorphismCombination(f, self.source, self.target, {m: f.mul(c, v) for m, v in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one))

    def __eq__(self, other):
        return (isinstance(other, MorphismCombination) and self.source == other.source
                and self.target == other.target and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))


def compose(quiver, g, f):
    if f.target != g.source:
        raise EndpointMismatch(f"cannot compose: {f.target} != {g.source}")
    fld = f.field
    terms = {}
    for mg, cg in g.terms.items():
        for mf, cf in f.terms.items():
            m = compose_basis(quiver, mg, mf)
            terms[m] = fld.add(terms.get(m, fld.zero), fld.mul(cg, cf))
    return MorphismCombination(fld, f.source, g.target, terms)


def segment(quiver, x, y):
    """The basis element from x to y inside one thread closure (x <= y)."""
    return make_pathlike(quiver, x, y, None)


def _pure_possible(quiver, x, y):
    if not (isinstance(x, Inner) and isinstance(y, Inner) and x.arrow == y.arrow):
        return False
    model = quiver.arrow(x.arrow).model
    return model.key(x.coord) <= model.key(y.coord)


def monomials(quiver, x, y, dead=None, cap=DEFAULT_CAP):
    """All basis morphisms x -> y that are not dead.

    ``dead`` is a predicate on basis morphisms that must be closed under
    composition on either side; prefixes that are dead are pruned.  A live
    prefix of length ``cap`` proves the enumeration cannot terminate and
    raises NotHomFinite with that prefix as witness.
    """
    x, y = quiver.check_point(x), quiver.check_point(y)
    dead = dead or (lambda m: False)
    out = []
    if _pure_possible(quiver, x, y):
        m = PathLike(x, y, None)
        if not dead(m):
            out.append(m)
    start, goal = exit_vertex(quiver, x), entry_vertex(quiver, y)
    stack = [(start, ())]
    while stack:
        v, path = stack.pop()
        prefix = PathLike(x, Vertex(v), path)
        if (path or isinstance(x, Inner)) and dead(prefix):
            continue
        if v == goal:
            m = PathLike(x, y, path)
            if not dead(m):
                out.append(m)
        nxt = quiver.out_arrows(v)
        if not nxt:
            continue
        if len(path) >= cap:
            raise NotHomFinite(f"live path of length {cap} from {x}", witness=path)
        for name in reversed(nxt):
            stack.append((quiver.arrow(name).target, path + (name,)))
    out.sort(key=lambda m: (m.path is not None, len(m.path or ()), m.path or ()))
    return out


def hom_basis(quiver, x, y, ideal=None, cap=DEFAULT_CAP):
    """Basis of Hom(x, y) in the quotient by ``ideal`` (None for the zero ideal)."""
    if ideal is None:
        return monomials(quiver, x, y, None, cap)
    return ideal.hom_basis(quiver, x, y, cap=cap)


def has_directed_cycle(quiver):
    color = {v: 0 for v in quiver.vertices}

    def visit(v):
        color[v] = 1
        for name in quiver.out_arrows(v):
            w = quiver.arrow(name).target
            if color[w] == 1:
                return True
            if color[w] == 0 and visit(w):
                return True
        color[v] = 2
        return False

    return any(color[v] == 0 and visit(v) for v in quiver.vertices)


def is_interval_finite(quiver):
    return not has_directed_cycle(quiver)


def count_quiver_paths(quiver, u, w, limit=DEFAULT_CAP):
    """Number of quiver paths from u to w (for acyclic quivers)."""
    memo = {}

    def count(v, depth):
        if depth > limit:
            raise NotHomFinite("cycle")
        key = v
        if key in memo:
            return memo[key]
        total = 1 if v == w else 0
        for name in quiver.out_arrows(v):
            total += count(quiver.arrow(name).target, depth + 1)
        memo[key] = total
        return total

    return count(u, 0)
