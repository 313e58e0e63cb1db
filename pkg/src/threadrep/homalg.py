"""Interval projectives and injectives, resolutions and Ext.

Everything is computed on one sampled bound quiver whose partition has a
point cell at every breakpoint (module markers, ideal breakpoints and their
translates by the gap lengths).  On such a partition each open cell is the
germ just after its lower end, so the finite projectives induce to the
interval projectives and resolutions can be computed by finite linear
algebra.
"""

import logging
from dataclasses import dataclass, field as dc_field

from .errors import NotHomFinite, NotLeftBounded, ResolutionTooLong
from .exactla import Matrix, Reducer, rref
from .ideal import IdealSpec
from .order import SRC, TGT, Vertex
from .partition import ValidPartition, cell_vertex, sample, sampled_bound_quiver
from .pathcat import DEFAULT_CAP
from .rep import FiniteQuiverRep, PwfRep, partition_of_rep
from .transport import induce, restrict

log = logging.getLogger(__name__)


# -- germs ------------------------------------------------------------------------------


@dataclass(frozen=True)
class StartGerm:
    """Class of intervals with a common start.

    ``arrow`` is None for a vertex (then ``pos`` is its name); otherwise
    ``pos`` is an inner coordinate or SRC, and ``after`` marks an open start.
    """

    arrow: object
    pos: object
    after: bool = False

    def is_vertex(self):
        return self.arrow is None


@dataclass(frozen=True)
class EndGerm:
    arrow: object
    pos: object
    before: bool = False

    def is_vertex(self):
        return self.arrow is None


def start_germ(quiver, arrow, pos, after=False):
    """Normalized start germ; closed starts at the end vertices become vertex germs."""
    if arrow is None:
        return StartGerm(None, pos, False)
    a = quiver.arrow(arrow)
    model = a.model
    pos = model.normalize(pos)
    if model.kind == "finite":
        if after:
            pos = 1 if pos == SRC else (pos + 1 if pos < model.n else TGT)
            after = False
    if model.kind == "empty" and after:
        pos, after = TGT, False
    if pos == TGT:
        if after:
            raise ValueError("no germ just after the target")
        return StartGerm(None, a.target)
    if pos == SRC and not after:
        return StartGerm(None, a.source)
    return StartGerm(arrow, pos, after)


def end_germ(quiver, arrow, pos, before=False):
    if arrow is None:
        return EndGerm(None, pos, False)
    a = quiver.arrow(arrow)
    model = a.model
    pos = model.normalize(pos)
    if model.kind == "finite":
        if before:
            pos = model.n if pos == TGT else (pos - 1 if pos > 1 else SRC)
            before = False
    if model.kind == "empty" and before:
        pos, before = SRC, False
    if pos == SRC:
        if before:
            raise ValueError("no germ just before the source")
        return EndGerm(None, a.source)
    if pos == TGT and not before:
        return EndGerm(None, a.target)
    return EndGerm(arrow, pos, before)


def _coord_label(quiver, arrow, pos):
    a = quiver.arrow(arrow)
    name = a.source if pos == SRC else a.target if pos == TGT else None
    return a.model.label(pos, name)


# -- the breakpoint model -----------------------------------------------------------------


@dataclass
class BreakpointModel:
    """A partition with point cells at all breakpoints, its sample and sampled quiver."""

    quiver: object
    ideal: IdealSpec
    partition: ValidPartition
    sbq: object

    @property
    def bound(self):
        return self.sbq.bound

    @property
    def sample(self):
        return self.sbq.sample

    def restrict(self, m):
        return restrict(m, self.sample, self.ideal, self.sbq)

    def induce(self, x):
        return induce(x, self.partition, self.sample, self.quiver, self.ideal, self.sbq)

    def start_germ_of(self, v):
        """The start germ whose projective is the finite projective at chain vertex v."""
        c = self.sbq.cell(v)
        if isinstance(c, Vertex):
            return StartGerm(None, v)
        return start_germ(self.quiver, c.arrow, c.lo.pos, not c.lo.closed)

    def end_germ_of(self, v):
        c = self.sbq.cell(v)
        if isinstance(c, Vertex):
            return EndGerm(None, v)
        return end_germ(self.quiver, c.arrow, c.hi.pos, not c.hi.closed)

    def vertex_of_start(self, g):
        """Chain vertex for a start germ (refining the model must have placed it)."""
        g = start_germ(self.quiver, g.arrow, g.pos, g.after)
        if g.is_vertex():
            return g.pos
        for i, c in enumerate(self.partition.cells(g.arrow), 1):
            if c.lo.pos == g.pos and c.lo.closed != g.after:
                return cell_vertex(g.arrow, i)
        raise ValueError(f"germ {g} is not a cell start of the model")

    def vertex_of_end(self, g):
        g = end_germ(self.quiver, g.arrow, g.pos, g.before)
        if g.is_vertex():
            return g.pos
        for i, c in enumerate(self.partition.cells(g.arrow), 1):
            if c.hi.pos == g.pos and c.hi.closed != g.before:
                return cell_vertex(g.arrow, i)
        raise ValueError(f"germ {g} is not a cell end of the model")

    def chain_along(self, arrow):
        a = self.quiver.arrow(arrow)
        k = len(self.partition.cells(arrow))
        return [a.source] + [cell_vertex(arrow, i) for i in range(1, k + 1)] + [a.target]


def _germ_coords(g):
    if g is None or g.is_vertex():
        return {}
    if g.pos in (SRC, TGT):
        return {}
    return {g.arrow: {g.pos}}


def breakpoint_model(quiver, ideal=None, modules=(), germs=(), extra=None, shift_rounds=8):
    """Breakpoint model adapted to the given modules, germs and ideal.

    ``extra`` maps arrows to additional coordinates.  Translates by gap
    lengths are closed off exactly on bounded threads and after
    ``shift_rounds`` rounds on unbounded ones.
    """
    ideal = ideal or IdealSpec()
    coords = {a.name: set() for a in quiver.threaded_arrows()}
    for m in modules:
        part = partition_of_rep(m)
        for a in coords:
            coords[a].update(pos for pos, _ in part.markers(a))
    for g in germs:
        for a, ps in _germ_coords(g).items():
            coords[a].update(ps)
    for a, ps in (extra or {}).items():
        coords[a].update(ps)
    markers = {}
    for a in quiver.threaded_arrows():
        model = a.model
        if model.kind == "finite":
            markers[a.name] = {(i, "+") for i in range(1, model.n)}
            continue
        pts = {p for p in coords[a.name] | ideal.breakpoints(quiver, a.name) if model.is_inner(p)}
        shifts = ideal.gap_shifts(a.name)
        bounded = model.lo is not None and model.hi is not None
        rounds = 0
        frontier = set(pts)
        while shifts and frontier and (bounded or rounds < shift_rounds):
            new = set()
            for p in frontier:
                for c in shifts:
                    for q in (p + c, p - c):
                        if model.is_inner(q) and q not in pts:
                            new.add(q)
            pts |= new
            frontier = new
            rounds += 1
        markers[a.name] = {(p, s) for p in pts for s in "+-"}
    part = ValidPartition.from_markers(quiver, markers)
    sbq = sampled_bound_quiver(quiver, ideal, part, sample(part))
    return BreakpointModel(quiver, ideal, part, sbq)


# -- Q-boundedness ------------------------------------------------------------------------


@dataclass
class BoundednessReport:
    bounded: bool
    witness: object = None

    def __bool__(self):
        return self.bounded


def q_bounded(quiver, ideal=None, side="left", cap=DEFAULT_CAP):
    """Whether no cycle at a vertex survives the ideal.

    For a finite quiver both sides reduce to the same test: every endomorphism
    space of a vertex is finite dimensional.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    ideal = ideal or IdealSpec()
    for v in quiver.vertices:
        try:
            ideal.hom_basis(quiver, Vertex(v), Vertex(v), cap)
        except NotHomFinite as exc:
            return BoundednessReport(False, _period(exc.witness))
    return BoundednessReport(True)


def _period(path):
    """Shortest word whose repetition gives the path (the cycle behind a long witness)."""
    if not path:
        return path
    path = tuple(path)
    for n in range(1, len(path) + 1):
        if all(path[i] == path[i % n] for i in range(len(path))):
            return path[:n]
    return path


def require_left_bounded(quiver, ideal, cap=DEFAULT_CAP):
    rep = q_bounded(quiver, ideal, "left", cap)
    if not rep:
        raise NotLeftBounded("a cycle survives the ideal", witness=rep.witness)


# -- finite projectives ---------------------------------------------------------------------


class FiniteProjective:
    """The projective e_u of a bound quiver algebra, with paths as basis labels."""

    def __init__(self, bq, field, u, cap=256):
        self.bq, self.field, self.u = bq, field, u
        f = field
        live = bq.live_paths(u, cap)
        by_end = {w: [] for w in bq.vertices}
        for p in live:
            by_end[bq.path_end(u, p)].append(p)
        self.index = {w: {p: i for i, p in enumerate(ps)} for w, ps in by_end.items()}
        rel_rows = {w: [] for w in bq.vertices}
        for s, t, terms in bq.linear_relations:
            prefixes = [p for p in by_end[s]]
            suffixes = bq.live_paths(t, cap)
            for p in prefixes:
                for q in suffixes:
                    w = bq.path_end(t, q)
                    row = [f.zero] * len(by_end[w])
                    nz = False
                    for c, path in terms:
                        full = p + tuple(path) + q
                        i = self.index[w].get(full)
                        if i is None:
                            continue
                        row[i] = f.add(row[i], f.from_fraction(c))
                        nz = True
                    if nz:
                        rel_rows[w].append(row)
        self.paths, self.reduced, self.pivots, self.free = {}, {}, {}, {}
        for w in bq.vertices:
            n = len(by_end[w])
            if rel_rows[w]:
                r = rref(Matrix(f, rel_rows[w], n))
                rows = [r.reduced.rows[i] for i in range(r.rank)]
                piv = list(r.pivots)
            else:
                rows, piv = [], []
            self.reduced[w], self.pivots[w] = rows, piv
            free = [i for i in range(n) if i not in set(piv)]
            self.free[w] = free
            self.paths[w] = [by_end[w][i] for i in free]
        self.all_paths = by_end

    def coordinates(self, w, path):
        """Coordinates of a path (from u to w) on the quotient basis; None if zero."""
        f = self.field
        i = self.index[w].get(tuple(path))
        if i is None:
            return None
        v = [f.zero] * len(self.all_paths[w])
        v[i] = f.one
        for row, pc in zip(self.reduced[w], self.pivots[w]):
            c = v[pc]
            if not f.is_zero(c):
                v = f.axpy(v, c, row)
        return [v[j] for j in self.free[w]]

    def rep(self):
        f, bq = self.field, self.bq
        dims = {w: len(self.paths[w]) for w in bq.vertices}
        maps = {}
        for a, (s, t) in bq.arrows.items():
            cols = []
            for p in self.paths[s]:
                c = self.coordinates(t, p + (a,))
                cols.append(c if c is not None else [f.zero] * dims[t])
            maps[a] = Matrix.from_columns(f, cols, dims[t]) if cols else Matrix.zero(f, dims[t], 0)
        return FiniteQuiverRep(bq, f, dims, maps, check=False)


class ProjectiveSum:
    """A finite direct sum of finite projectives, listed by their top vertices."""

    def __init__(self, bq, field, tops, cache=None):
        self.bq, self.field, self.tops = bq, field, list(tops)
        cache = cache if cache is not None else {}
        self.parts = []
        for u in self.tops:
            if u not in cache:
                cache[u] = FiniteProjective(bq, field, u)
            self.parts.append(cache[u])
        self.offsets = {}
        for w in bq.vertices:
            o, offs = 0, []
            for p in self.parts:
                offs.append(o)
                o += len(p.paths[w])
            self.offsets[w] = (offs, o)
        reps = [p.rep() for p in self.parts]
        if reps:
            r = reps[0]
            for x in reps[1:]:
                r = r.direct_sum(x)
        else:
            r = FiniteQuiverRep.zero(bq, field)
        self.rep = r

    def dim(self, w):
        return self.offsets[w][1]


def _top(x):
    """Generators of x: for each vertex a basis of a complement of the incoming images."""
    f, bq = x.field, x.quiver
    gens = []
    for u in bq.vertices:
        d = x.dims[u]
        if not d:
            continue
        span = []
        for a in bq.in_arrows(u):
            span.extend(x.maps[a].columns())
        basis = list(span)
        rank = rref(Matrix(f, basis, d)).rank if basis else 0
        for e in range(d):
            v = tuple(f.one if i == e else f.zero for i in range(d))
            if rref(Matrix(f, basis + [v], d)).rank > rank:
                basis.append(v)
                rank += 1
                gens.append((u, v))
    return gens


def _cover_map(x, ps, gens):
    """Matrices, vertex by vertex, of the map from the projective sum onto x."""
    f = x.field
    out = {}
    for w in x.quiver.vertices:
        cols = []
        for (u, g), part in zip(gens, ps.parts):
            for p in part.paths[w]:
                m = x.path_matrix(u, p)
                cols.append([sum_dot(f, row, g) for row in m.rows])
        out[w] = Matrix.from_columns(f, cols, x.dims[w]) if cols else Matrix.zero(f, x.dims[w], 0)
    return out


def sum_dot(f, row, v):
    acc = f.zero
    for a, b in zip(row, v):
        if not f.is_zero(a) and not f.is_zero(b):
            acc = f.add(acc, f.mul(a, b))
    return acc


def kernel_rep(src, hom):
    """Kernel of a homomorphism out of src as a representation, with its inclusion."""
    f, bq = src.field, src.quiver
    incl, dims = {}, {}
    for w in bq.vertices:
        cols = hom[w].kernel().columns() if src.dims[w] else []
        dims[w] = len(cols)
        incl[w] = Matrix.from_columns(f, cols, src.dims[w]) if cols else Matrix.zero(f, src.dims[w], 0)
    maps = {}
    for a, (s, t) in bq.arrows.items():
        if not dims[s] or not dims[t]:
            maps[a] = Matrix.zero(f, dims[t], dims[s])
            continue
        red = Reducer(f, incl[t].columns(), src.dims[t])
        img = src.maps[a] @ incl[s]
        maps[a] = Matrix.from_columns(f, [red.coordinates(c) for c in img.columns()], dims[t])
    return FiniteQuiverRep(bq, f, dims, maps, check=False), incl


@dataclass
class ResolutionStep:
    tops: list
    # generators of this term, as vectors in the previous term (None for the first)
    images: list
    projective: ProjectiveSum = None


@dataclass
class FiniteResolution:
    """Minimal projective resolution of a finite representation."""

    module: FiniteQuiverRep
    steps: list = dc_field(default_factory=list)
    complete: bool = True

    def __len__(self):
        return len(self.steps)


def finite_resolution(x, max_len=32):
    """Minimal projective resolution by iterated projective covers."""
    bq, f = x.quiver, x.field
    cache = {}
    res = FiniteResolution(x)
    cur = x
    # generators of the current term as vectors in the previous projective sum
    incl = None
    while cur.total_dim:
        if len(res.steps) >= max_len:
            res.complete = False
            raise ResolutionTooLong(f"no resolution of length at most {max_len}", witness=res)
        gens = _top(cur)
        ps = ProjectiveSum(bq, f, [u for u, _ in gens], cache)
        images = None
        if incl is not None:
            images = [tuple(sum_dot(f, row, g) for row in incl[u].rows) for u, g in gens]
        res.steps.append(ResolutionStep([u for u, _ in gens], images, ps))
        hom = _cover_map(cur, ps, gens)
        cur, incl = kernel_rep(ps.rep, hom)
    return res


def _hom_from_step(prev, step, n):
    """The map Hom(P_prev, n) -> Hom(P_step, n) induced by the differential."""
    f = n.field
    rows_total = sum(n.dims[u] for u in step.tops)
    cols_total = sum(n.dims[u] for u in prev.tops)
    grid = [[f.zero] * cols_total for _ in range(rows_total)]
    row0 = 0
    for u, vec in zip(step.tops, step.images):
        offs, _ = prev.projective.offsets[u]
        col0 = 0
        for j, part in enumerate(prev.projective.parts):
            uj = prev.tops[j]
            block = Matrix.zero(f, n.dims[u], n.dims[uj])
            for k, p in enumerate(part.paths[u]):
                c = vec[offs[j] + k]
                if not f.is_zero(c):
                    block = block + n.path_matrix(uj, p).scale(c)
            for r in range(n.dims[u]):
                for s in range(n.dims[uj]):
                    grid[row0 + r][col0 + s] = block.rows[r][s]
            col0 += n.dims[uj]
        row0 += n.dims[u]
    return Matrix(f, grid, cols_total)


def finite_ext_dims(res, n, upto=2):
    """dim Ext^i(module, n) for i = 0..upto from a projective resolution of the module."""
    steps = res.steps
    homs = [sum(n.dims[u] for u in s.tops) for s in steps]
    diffs = []
    for i in range(1, len(steps)):
        diffs.append(_hom_from_step(steps[i - 1], steps[i], n))

    def rank_d(i):
        # d^i : Hom(P_{i-1}, n) -> Hom(P_i, n)
        if i <= 0 or i >= len(steps):
            return 0
        return diffs[i - 1].rank()

    out = []
    for i in range(upto + 1):
        if i >= len(steps):
            out.append(0)
            continue
        out.append(homs[i] - rank_d(i + 1) - rank_d(i))
    return out


# -- pwf level ----------------------------------------------------------------------------


def _ideal_of(ideal, *modules):
    if ideal is not None:
        return ideal
    for m in modules:
        if m is not None and m.ideal is not None:
            return m.ideal
    return IdealSpec()


def proj(germ, quiver, field, ideal=None, model=None):
    """The interval projective of a start germ as a cell-constant representation."""
    ideal = ideal or IdealSpec()
    require_left_bounded(quiver, ideal)
    model = model or breakpoint_model(quiver, ideal, germs=[germ])
    u = model.vertex_of_start(germ)
    if u in model.sbq.dead_vertices:
        log.info("projective of %s is zero", germ)
        return PwfRep.zero(quiver, field, ideal)
    x = FiniteProjective(model.bound, field, u).rep()
    return model.induce(x)


def inj(germ, quiver, field, ideal=None, model=None):
    """The interval injective of an end germ, dual to a projective of the opposite quiver."""
    ideal = ideal or IdealSpec()
    if not q_bounded(quiver, ideal, "right"):
        raise NotLeftBounded("a cycle survives the ideal")
    model = model or breakpoint_model(quiver, ideal, germs=[germ])
    u = model.vertex_of_end(germ)
    if u in model.sbq.dead_vertices:
        log.info("injective of %s is zero", germ)
        return PwfRep.zero(quiver, field, ideal)
    return model.induce(finite_injective(model.bound, field, u))


def finite_injective(bq, field, u):
    op = FiniteProjective(bq.opposite(), field, u).rep()
    maps = {a: op.maps[a].transpose() for a in bq.arrows}
    return FiniteQuiverRep(bq, field, dict(op.dims), maps, check=False)


def germ_label(model, germ, support=None):
    """Printable germ such as "[0,·)" or "(1/2,·]"; point supports print as "[v,v]"."""
    q = model.quiver
    if germ.is_vertex():
        name = germ.pos
        start = "["
        coord = name
        arrows = [q.arrow(a) for a in q.out_arrows(name) if q.arrow(a).threaded]
    else:
        start = "(" if germ.after else "["
        coord = _coord_label(q, germ.arrow, germ.pos)
        arrows = [q.arrow(germ.arrow)]
    if support is None:
        return f"{start}{coord},·"
    u = model.vertex_of_start(germ)
    nonzero = [v for v, d in support.dims.items() if d]
    if nonzero == [u] and (germ.is_vertex() or not germ.after):
        return f"[{coord},{coord}]"
    close = "]"
    for a in arrows:
        chain = model.chain_along(a.name)
        if u in chain:
            chain = chain[chain.index(u):]
        live = [v for v in chain if support.dims.get(v, 0)]
        if not live:
            continue
        last = live[-1]
        c = model.sbq.cell(last)
        close = "]" if isinstance(c, Vertex) or c.hi.closed else ")"
        break
    return f"{start}{coord},·{close}"


@dataclass
class Resolution:
    """A projective resolution of a cell-constant representation."""

    model: BreakpointModel
    finite: FiniteResolution
    terms: list

    def labels(self):
        return [[germ_label(self.model, g, s) for g, s in term] for term in self.terms]

    def germs(self):
        return [[g for g, _ in term] for term in self.terms]

    def __len__(self):
        return len(self.terms)


def proj_resolution(m, ideal=None, max_len=16, model=None):
    """Projective resolution of m as a list of terms, each a list of start germs."""
    ideal = _ideal_of(ideal, m)
    require_left_bounded(m.quiver, ideal)
    model = model or breakpoint_model(m.quiver, ideal, [m])
    x = model.restrict(m)
    fin = finite_resolution(x, max_len)
    terms = []
    for step in fin.steps:
        term = []
        for u, part in zip(step.tops, step.projective.parts):
            term.append((model.start_germ_of(u), part.rep()))
        terms.append(term)
    return Resolution(model, fin, terms)


def ext_dims(m, n, upto=2, ideal=None, extra=None, max_len=16):
    """dim Ext^i(m, n) for i = 0..upto, on a common breakpoint model."""
    ideal = _ideal_of(ideal, m, n)
    require_left_bounded(m.quiver, ideal)
    model = breakpoint_model(m.quiver, ideal, [m, n], extra=extra)
    x, y = model.restrict(m), model.restrict(n)
    fin = finite_resolution(x, max_len)
    return finite_ext_dims(fin, y, upto)


def ext(m, n, i, ideal=None, extra=None):
    if i < 0:
        raise ValueError("negative degree")
    return ext_dims(m, n, i, ideal, extra)[i]


def is_projective_rep(x):
    """Whether a finite representation is projective (its cover has zero kernel)."""
    if not x.total_dim:
        return True
    gens = _top(x)
    ps = ProjectiveSum(x.quiver, x.field, [u for u, _ in gens])
    return all(ps.dim(w) == x.dims[w] for w in x.quiver.vertices)


def cover_germs(model, x):
    """Start germs of the projective cover of a finite representation of the model."""
    return sorted((model.start_germ_of(u) for u, _ in _top(x)), key=repr)
