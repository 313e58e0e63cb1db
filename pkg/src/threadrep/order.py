"""Totally ordered thread sets, points on them, and intervals.

Each arrow carries an order model: empty, a finite chain ``1..n``, or the
rationals strictly between two bounds (either of which may be infinite).
Positions on the closure of a thread are ``SRC``, ``TGT`` or an inner
coordinate.  For a dense model with a finite lower bound the coordinate
equal to that bound is the source vertex, and similarly for the upper
bound; coordinates are normalized accordingly.

Dense models stand in for real intervals.  Every datum that can be written
down (breakpoints, endpoints, thresholds) is rational, and order-isomorphic
dense sets give isomorphic categories of such representations.
"""

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import MalformedPartition

SRC = "src"
TGT = "tgt"


def parse_rational(value):
    """Parse an int, Fraction or a ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class OrderModel:
    kind: str
    n: int = 0
    lo: object = None
    hi: object = None

    @staticmethod
    def empty():
        return OrderModel("empty")

    @staticmethod
    def finite(n):
        if n <= 0:
            return OrderModel("empty")
        return OrderModel("finite", n=n)

    @staticmethod
    def dense(lo=None, hi=None):
        lo = None if lo is None else parse_rational(lo)
        hi = None if hi is None else parse_rational(hi)
        if lo is not None and hi is not None and not lo < hi:
            raise ValueError("dense model needs lo < hi")
        return OrderModel("dense", lo=lo, hi=hi)

    @property
    def is_empty(self):
        return self.kind == "empty"

    @property
    def is_dense(self):
        return self.kind == "dense"

    @property
    def is_finite(self):
        return self.kind == "finite"

    def is_inner(self, c):
        if self.kind == "finite":
            return isinstance(c, int) and 1 <= c <= self.n
        if self.kind == "dense":
            c = Fraction(c)
            return (self.lo is None or self.lo < c) and (self.hi is None or c < self.hi)
        return False

    def normalize(self, pos):
        """Map a raw coordinate to SRC/TGT/inner form."""
        if pos in (SRC, TGT):
            return pos
        if self.kind == "finite":
            c = int(pos)
            if c <= 0:
                return SRC
            if c > self.n:
                return TGT
            return c
        if self.kind == "dense":
            c = parse_rational(pos)
            if self.lo is not None and c <= self.lo:
                if c < self.lo:
                    raise ValueError(f"coordinate {c} below the thread")
                return SRC
            if self.hi is not None and c >= self.hi:
                if c > self.hi:
                    raise ValueError(f"coordinate {c} above the thread")
                return TGT
            return c
        raise ValueError("the empty thread has no inner coordinates")

    def key(self, pos):
        if pos == SRC:
            return (0, 0)
        if pos == TGT:
            return (2, 0)
        return (1, pos)

    def value(self, pos):
        """Numeric coordinate of a position; None stands for an infinite end."""
        if pos == SRC:
            if self.kind == "dense":
                return self.lo
            return Fraction(0)
        if pos == TGT:
            if self.kind == "dense":
                return self.hi
            if self.kind == "finite":
                return Fraction(self.n + 1)
            return Fraction(1)
        return Fraction(pos)

    def label(self, pos, vertex_name=None):
        if pos in (SRC, TGT):
            v = self.value(pos)
            if v is None:
                if vertex_name is not None:
                    return vertex_name
                return "-inf" if pos == SRC else "+inf"
            return format_rational(v)
        return format_rational(pos)

    def to_json(self):
        if self.kind == "empty":
            return "empty"
        if self.kind == "finite":
            return {"finite": self.n}
        return {"dense": [None if self.lo is None else format_rational(self.lo),
                          None if self.hi is None else format_rational(self.hi)]}


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class Vertex:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Inner:
    arrow: str
    coord: object

    def __str__(self):
        return f"{self.arrow}:{format_rational(self.coord)}"


def position(point, arrow):
    """Position of a point on the closure of ``arrow`` (an ArrowInfo), or None."""
    if isinstance(point, Inner):
        return point.coord if point.arrow == arrow.name else None
    if point.name == arrow.source:
        return SRC
    if point.name == arrow.target:
        return TGT
    return None


def point_at(arrow, pos):
    """The thread point sitting at a position of ``arrow``'s closure."""
    if pos == SRC:
        return Vertex(arrow.source)
    if pos == TGT:
        return Vertex(arrow.target)
    return Inner(arrow.name, pos)


def compare(p, q, quiver, arrow=None):
    """Compare two points inside one thread closure."""
    if isinstance(p, Vertex) and isinstance(q, Vertex) and p == q:
        return Ordering.EQUAL
    candidates = []
    if arrow is not None:
        candidates = [quiver.arrow(arrow)]
    elif isinstance(p, Inner):
        candidates = [quiver.arrow(p.arrow)]
    elif isinstance(q, Inner):
        candidates = [quiver.arrow(q.arrow)]
    for a in candidates:
        pp, qq = position(p, a), position(q, a)
        if pp is None or qq is None:
            continue
        kp, kq = a.model.key(pp), a.model.key(qq)
        if kp < kq:
            return Ordering.LESS
        if kp > kq:
            return Ordering.GREATER
        return Ordering.EQUAL
    return Ordering.INCOMPARABLE


@dataclass(frozen=True)
class Bound:
    pos: object
    closed: bool


@dataclass(frozen=True)
class ThreadInterval:
    """An interval of the closure of one thread.

    ``lo`` and ``hi`` are Bounds; a bound at SRC or TGT that is closed
    includes the corresponding vertex.
    """

    arrow: str
    lo: Bound
    hi: Bound

    def key(self, model):
        return (model.key(self.lo.pos), 0 if self.lo.closed else 1,
                model.key(self.hi.pos), 1 if self.hi.closed else 0)

    def touches_vertex(self):
        return (self.lo.pos == SRC and self.lo.closed) or (self.hi.pos == TGT and self.hi.closed)

    def is_point(self):
        return self.lo.pos == self.hi.pos


def make_interval(arrow, lo, hi):
    """Build a normalized interval on ``arrow`` (an ArrowInfo).

    ``lo`` and ``hi`` are (pos, closed) pairs with raw coordinates.
    """
    model = arrow.model
    lpos, lclosed = model.normalize(lo[0]), bool(lo[1])
    hpos, hclosed = model.normalize(hi[0]), bool(hi[1])
    if model.kind == "finite":
        # finite chains have no gaps: move open bounds onto neighbours
        if not lclosed:
            lpos = 1 if lpos == SRC else (lpos + 1 if lpos < model.n else TGT)
            lclosed = True
        if not hclosed:
            hpos = model.n if hpos == TGT else (hpos - 1 if hpos > 1 else SRC)
            hclosed = True
    if model.kind == "empty" and ((lpos == SRC and not lclosed) or (hpos == TGT and not hclosed)):
        # an open end at a vertex of an empty thread leaves nothing there
        if lpos == SRC and not lclosed:
            lpos, lclosed = TGT, True
        if hpos == TGT and not hclosed:
            hpos, hclosed = SRC, True
    kl, kh = model.key(lpos), model.key(hpos)
    if kl > kh or (kl == kh and not (lclosed and hclosed)):
        raise ValueError("empty interval")
    if arrow.source == arrow.target and lpos == SRC and lclosed and hpos == TGT and hclosed:
        raise ValueError("the whole closure of a loop is not an interval")
    return ThreadInterval(arrow.name, Bound(lpos, lclosed), Bound(hpos, hclosed))


def contains(interval, point, quiver):
    arrow = quiver.arrow(interval.arrow)
    pos = position(point, arrow)
    if pos is None:
        return False
    return pos_in(interval, pos, arrow.model)


def pos_in(interval, pos, model):
    k = model.key(pos)
    lk, hk = model.key(interval.lo.pos), model.key(interval.hi.pos)
    if k < lk or (k == lk and not interval.lo.closed):
        return False
    if k > hk or (k == hk and not interval.hi.closed):
        return False
    return True


def same_start(i, j):
    return i.arrow == j.arrow and i.lo == j.lo


def same_end(i, j):
    return i.arrow == j.arrow and i.hi == j.hi


def intersect(i, j, model):
    if i.arrow != j.arrow:
        return None
    lo = max((i.lo, j.lo), key=lambda b: (model.key(b.pos), 0 if b.closed else 1))
    hi = min((i.hi, j.hi), key=lambda b: (model.key(b.pos), 1 if b.closed else 0))
    kl, kh = model.key(lo.pos), model.key(hi.pos)
    if kl > kh or (kl == kh and not (lo.closed and hi.closed)):
        return None
    return ThreadInterval(i.arrow, lo, hi)


def format_interval(interval, model, source_name=None, target_name=None):
    left = "[" if interval.lo.closed else "("
    right = "]" if interval.hi.closed else ")"
    lo = model.label(interval.lo.pos, source_name if interval.lo.closed else None)
    hi = model.label(interval.hi.pos, target_name if interval.hi.closed else None)
    return f"{left}{lo},{hi}{right}"


def interval_to_json(interval):
    def enc(b, end):
        pos = end if b.pos in (SRC, TGT) else (str(b.pos) if isinstance(b.pos, int) else format_rational(b.pos))
        return [pos, b.closed]

    return {"arrow": interval.arrow, "lo": enc(interval.lo, "src"), "hi": enc(interval.hi, "tgt")}


# Partitions of one thread are handled through boundary markers: (pos, "-")
# is a cut just below pos (pos opens a new cell) and (pos, "+") a cut just
# above pos (pos closes a cell).


def cell_markers(cells, model):
    """Markers of a list of cells, checking that they partition the thread."""
    if model.kind == "empty":
        if cells:
            raise MalformedPartition("an empty thread has no cells")
        return frozenset()
    if not cells:
        raise MalformedPartition("a nonempty thread needs at least one cell")
    ordered = sorted(cells, key=lambda c: c.key(model))
    first, last = ordered[0], ordered[-1]
    start = Bound(SRC, False) if model.kind == "dense" else Bound(1, True)
    end = Bound(TGT, False) if model.kind == "dense" else Bound(model.n, True)
    if first.lo != start or last.hi != end:
        raise MalformedPartition("cells do not cover the thread")
    markers = set()
    for a, b in zip(ordered, ordered[1:]):
        if model.kind == "finite":
            if not (a.hi.closed and b.lo.closed and b.lo.pos == a.hi.pos + 1):
                raise MalformedPartition("cells overlap or leave a gap")
            markers.add((a.hi.pos, "+"))
            continue
        if a.hi.pos != b.lo.pos or a.hi.closed == b.lo.closed:
            raise MalformedPartition("cells overlap or leave a gap")
        markers.add((a.hi.pos, "+" if a.hi.closed else "-"))
    for c in ordered:
        kl, kh = model.key(c.lo.pos), model.key(c.hi.pos)
        if kl > kh or (kl == kh and not (c.lo.closed and c.hi.closed)):
            raise MalformedPartition("empty cell")
        if c.lo.pos == SRC and c.lo.closed or c.hi.pos == TGT and c.hi.closed:
            raise MalformedPartition("cells must avoid the vertices")
    return frozenset(markers)


def cells_from_markers(arrow_name, model, markers):
    if model.kind == "empty":
        return []
    norm = set()
    for pos, side in markers:
        if model.kind == "finite":
            if side == "-":
                pos, side = pos - 1, "+"
            if 1 <= pos < model.n:
                norm.add((pos, "+"))
        else:
            if not model.is_inner(pos):
                raise MalformedPartition(f"marker {pos} is not an inner coordinate")
            norm.add((pos, side))
    ordered = sorted(norm, key=lambda m: (model.key(m[0]), 0 if m[1] == "-" else 1))
    cells = []
    if model.kind == "finite":
        lo = 1
        for pos, _ in ordered:
            cells.append(ThreadInterval(arrow_name, Bound(lo, True), Bound(pos, True)))
            lo = pos + 1
        cells.append(ThreadInterval(arrow_name, Bound(lo, True), Bound(model.n, True)))
        return cells
    lo = Bound(SRC, False)
    for pos, side in ordered:
        if side == "-":
            cells.append(ThreadInterval(arrow_name, lo, Bound(pos, False)))
            lo = Bound(pos, True)
        else:
            cells.append(ThreadInterval(arrow_name, lo, Bound(pos, True)))
            lo = Bound(pos, False)
    cells.append(ThreadInterval(arrow_name, lo, Bound(TGT, False)))
    return cells


def interval_markers(interval, model):
    """Markers needed so that ``interval`` becomes a union of cells."""
    out = set()
    lo, hi = interval.lo, interval.hi
    if lo.pos not in (SRC, TGT):
        out.add((lo.pos, "-" if lo.closed else "+"))
    if hi.pos not in (SRC, TGT):
        out.add((hi.pos, "+" if hi.closed else "-"))
    if model.kind == "finite":
        fixed = set()
        for pos, side in out:
            if side == "-":
                pos, side = pos - 1, "+"
            if 1 <= pos < model.n:
                fixed.add((pos, side))
        return fixed
    return out


def refine_cells(cells1, cells2, model, arrow_name=None):
    """Common refinement of two partitions of the same thread."""
    if arrow_name is None:
        arrow_name = (cells1 or cells2)[0].arrow if (cells1 or cells2) else ""
    m1 = cell_markers(cells1, model)
    m2 = cell_markers(cells2, model)
    return cells_from_markers(arrow_name, model, m1 | m2)


def cell_index(cells, pos, model):
    for i, c in enumerate(cells):
        if pos_in(c, pos, model):
            return i
    return None
