"""Finite data for pointwise finite-dimensional representations.

A ``PwfRep`` is a representation of the chain quiver of a partition (the
core: one space per vertex and per cell, one matrix per chain arrow) plus
a finite list of noise intervals with multiplicities.  Inside a cell every
segment acts as the identity, so the core determines the whole functor.
Noise intervals never touch a vertex and are kept as intervals.
"""

from dataclasses import dataclass, field as dc_field

from .errors import EndpointMismatch, RelationViolation
from .exactla import Matrix, block_diagonal
from .ideal import IdealSpec
from .order import (SRC, TGT, Bound, Inner, ThreadInterval, Vertex,
                    interval_markers, intersect,
                    pos_in)
from .partition import (DimensionVector, ValidPartition, cell_vertex, sample,
                        cell_witnesses, chain_arrow, chain_path_of,
                        chain_quiver)
from .pathcat import DEFAULT_CAP, PathLike, format_pathlike, monomials


class FiniteQuiverRep:
    """A representation of a bound quiver: spaces and matrices."""

    def __init__(self, bq, field, dims, maps=None, check=True):
        self.quiver = bq
        self.field = field
        self.dims = {v: int(dims.get(v, 0)) for v in bq.vertices}
        maps = maps or {}
        self.maps = {}
        for a, (s, t) in bq.arrows.items():
            m = maps.get(a)
            if m is None:
                m = Matrix.zero(field, self.dims[t], self.dims[s])
            if m.shape != (self.dims[t], self.dims[s]):
                raise ValueError(f"matrix for {a} has shape {m.shape}, expected {(self.dims[t], self.dims[s])}")
            self.maps[a] = m
        extra = set(maps) - set(bq.arrows)
        if extra:
            raise ValueError(f"maps for unknown arrows {sorted(extra)}")
        if check:
            self.check_relations()

    @classmethod
    def zero(cls, bq, field):
        return cls(bq, field, {})

    def path_matrix(self, u, path):
        m = Matrix.identity(self.field, self.dims[u])
        for a in path:
            m = self.maps[a] @ m
        return m

    def violated_relations(self):
        bad = []
        for r in self.quiver.zero_relations:
            if not self.path_matrix(self.quiver.source(r[0]), r).is_zero():
                bad.append(r)
        f = self.field
        for s, t, terms in self.quiver.linear_relations:
            acc = Matrix.zero(f, self.dims[t], self.dims[s])
            for c, p in terms:
                acc = acc + self.path_matrix(s, p).scale(f.from_fraction(c))
            if not acc.is_zero():
                bad.append(tuple(p for _, p in terms))
        return bad

    def check_relations(self):
        bad = self.violated_relations()
        if bad:
            raise RelationViolation(f"relation {bad[0]} does not vanish", witness=bad[0])

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def dim_vector(self):
        return tuple(self.dims[v] for v in self.quiver.vertices)

    def is_zero(self):
        return self.total_dim == 0

    def direct_sum(self, other):
        if other.quiver != self.quiver:
            raise ValueError("representations of different quivers")
        dims = {v: self.dims[v] + other.dims[v] for v in self.quiver.vertices}
        maps = {a: block_diagonal(self.field, [self.maps[a], other.maps[a]]) for a in self.quiver.arrows}
        return FiniteQuiverRep(self.quiver, self.field, dims, maps, check=False)

    def restrict_to(self, bq):
        """The same data viewed on a subquiver (vertices and arrows subsets)."""
        return FiniteQuiverRep(bq, self.field, {v: self.dims[v] for v in bq.vertices},
                               {a: self.maps[a] for a in bq.arrows})

    def map_field(self, target, convert):
        return FiniteQuiverRep(self.quiver, target, self.dims,
                               {a: m.map_field(target, convert) for a, m in self.maps.items()}, check=False)

    def __eq__(self, other):
        return (isinstance(other, FiniteQuiverRep) and self.quiver == other.quiver
                and self.field == other.field and self.dims == other.dims and self.maps == other.maps)

    def __hash__(self):
        return hash((self.dim_vector(), tuple(self.maps[a] for a in self.quiver.arrows)))

    def to_json(self):
        return {
            "dims": {v: d for v, d in self.dims.items() if d},
            "maps": {a: m.to_strings() for a, m in self.maps.items() if m.nrows and m.ncols},
        }


def _merge_noise(noise, quiver):
    counts = {}
    for iv, mult in noise:
        if mult < 0:
            raise ValueError("negative multiplicity")
        if mult:
            counts[iv] = counts.get(iv, 0) + mult
    def key(item):
        iv = item[0]
        return (iv.arrow, iv.key(quiver.arrow(iv.arrow).model))
    return tuple(sorted(counts.items(), key=key))


class PwfRep:
    """Cell-normalized core on a partition plus an explicit noise list."""

    def __init__(self, quiver, field, partition, dims=None, maps=None, noise=(), ideal=None):
        self.quiver = quiver
        self.field = field
        self.partition = partition
        self.ideal = ideal or IdealSpec()
        self.core = FiniteQuiverRep(chain_quiver(quiver, partition), field, dims or {}, maps or {})
        for iv, _ in noise:
            if iv.touches_vertex():
                raise ValueError("noise intervals must avoid the vertices")
        self.noise = _merge_noise(noise, quiver)

    @classmethod
    def from_core(cls, quiver, partition, core, noise=(), ideal=None):
        return cls(quiver, core.field, partition, core.dims, core.maps, noise, ideal)

    @classmethod
    def zero(cls, quiver, field, ideal=None):
        return cls(quiver, field, ValidPartition.coarsest(quiver), ideal=ideal)

    def __eq__(self, other):
        return (isinstance(other, PwfRep) and self.partition == other.partition
                and self.core == other.core and self.noise == other.noise)

    def __hash__(self):
        return hash((self.partition, self.noise))

    def __repr__(self):
        return f"PwfRep(cells={self.partition.labels()}, dims={self.core.dims}, noise={len(self.noise)})"

    # -- evaluation --------------------------------------------------------------

    def _noise_at(self, point):
        out = []
        if isinstance(point, Vertex):
            return out
        model = self.quiver.arrow(point.arrow).model
        for iv, mult in self.noise:
            if iv.arrow == point.arrow and pos_in(iv, point.coord, model):
                out.append((iv, mult))
        return out

    def eval(self, point):
        point = self.quiver.check_point(point)
        core = self.core.dims[self.partition.vertex_of(point)]
        return core + sum(m for _, m in self._noise_at(point))

    def eval_map(self, m):
        q = self.quiver
        x, y = q.check_point(m.source), q.check_point(m.target)
        if (x, y) != (m.source, m.target):
            raise EndpointMismatch("morphism endpoints are not normalized points")
        f = self.field
        u = self.partition.vertex_of(x)
        core = self.core.path_matrix(u, chain_path_of(q, self.partition, m))
        nx, ny = self._noise_at(x), self._noise_at(y)
        rows = sum(k for _, k in ny)
        cols = sum(k for _, k in nx)
        noise = Matrix.zero(f, rows, cols)
        if m.is_pure and nx and ny:
            grid = [list(r) for r in noise.rows]
            ry = {}
            off = 0
            for iv, k in ny:
                ry[iv] = off
                off += k
            off = 0
            for iv, k in nx:
                if iv in ry:
                    for t in range(k):
                        grid[ry[iv] + t][off + t] = f.one
                off += k
            noise = Matrix(f, grid, cols)
        return block_diagonal(f, [core, noise])

    # -- normal forms ----------------------------------------------------------------

    def on_partition(self, target):
        """The same core written on a refinement of its partition."""
        if not target.refines(self.partition):
            raise ValueError("target partition does not refine the current one")
        q, f = self.quiver, self.field
        dims = {v: self.core.dims[v] for v in q.vertices}
        maps = {}
        for a in q.arrows:
            if not a.threaded:
                maps[a.name] = self.core.maps[a.name]
                continue
            old = self.partition.cells(a.name)
            new = target.cells(a.name)
            model = a.model
            owner = []
            for c in new:
                probe = c.lo.pos if c.lo.closed else _inside(c, model)
                owner.append(next(i for i, o in enumerate(old) if pos_in(o, probe, model)) + 1)
            for j, i in enumerate(owner, 1):
                dims[cell_vertex(a.name, j)] = self.core.dims[cell_vertex(a.name, i)]
            k = len(new)
            maps[chain_arrow(a.name, 0)] = self.core.maps[chain_arrow(a.name, 0)]
            maps[chain_arrow(a.name, k)] = self.core.maps[chain_arrow(a.name, len(old))]
            for j in range(1, k):
                i1, i2 = owner[j - 1], owner[j]
                if i1 == i2:
                    maps[chain_arrow(a.name, j)] = Matrix.identity(f, dims[cell_vertex(a.name, j)])
                else:
                    maps[chain_arrow(a.name, j)] = self.core.maps[chain_arrow(a.name, i1)]
        return PwfRep(q, f, target, dims, maps, self.noise, self.ideal)

    def core_partition(self):
        """Coarsest partition on which the core is constant."""
        markers = {}
        for a in self.quiver.threaded_arrows():
            cells = self.partition.cells(a.name)
            keep = set()
            for j in range(1, len(cells)):
                m = self.core.maps[chain_arrow(a.name, j)]
                if not m.is_invertible():
                    c = cells[j - 1]
                    keep.add((c.hi.pos, "+" if c.hi.closed else "-"))
            markers[a.name] = keep
        return ValidPartition.from_markers(self.quiver, markers)

    def normalized(self):
        """Core moved to its coarsest partition, merging cells joined by isomorphisms."""
        target = self.core_partition()
        q, f = self.quiver, self.field
        dims = {v: self.core.dims[v] for v in q.vertices}
        maps = {}
        for a in q.arrows:
            if not a.threaded:
                maps[a.name] = self.core.maps[a.name]
                continue
            old = self.partition.cells(a.name)
            k_old = len(old)
            groups = _merge_groups(self.core, a.name, k_old)
            maps[chain_arrow(a.name, 0)] = self.core.maps[chain_arrow(a.name, 0)]
            for g, (i, j) in enumerate(groups, 1):
                dims[cell_vertex(a.name, g)] = self.core.dims[cell_vertex(a.name, i)]
                # transport from the first cell of the group to its last
                t = Matrix.identity(f, self.core.dims[cell_vertex(a.name, i)])
                for s in range(i, j):
                    t = self.core.maps[chain_arrow(a.name, s)] @ t
                maps[chain_arrow(a.name, g)] = self.core.maps[chain_arrow(a.name, j)] @ t
        return PwfRep(q, f, target, dims, maps, self.noise, self.ideal)

    def with_noise_in_core(self):
        """Fold the noise list into the core (on a refined partition)."""
        if not self.noise:
            return self
        extra = {}
        for iv, _ in self.noise:
            model = self.quiver.arrow(iv.arrow).model
            extra.setdefault(iv.arrow, set()).update(interval_markers(iv, model))
        base = self.on_partition(self.partition.with_markers(extra))
        out = PwfRep(self.quiver, self.field, base.partition, base.core.dims, base.core.maps, (), self.ideal)
        for iv, mult in self.noise:
            for _ in range(mult):
                out = direct_sum(out, interval_module(self.quiver, self.field, iv, ideal=self.ideal))
        return out

    def is_noise_free_data(self):
        return not self.noise

    def to_json(self):
        from .order import interval_to_json
        return {
            "partition": self.partition.to_json(),
            "core": self.core.to_json(),
            "noise": [{"interval": interval_to_json(iv), "mult": m} for iv, m in self.noise],
        }


def _inside(cell, model):
    from .partition import cell_midpoint
    return cell_midpoint(cell, model)


def _merge_groups(core, arrow, k):
    groups = []
    start = 1
    for j in range(1, k):
        if not core.maps[chain_arrow(arrow, j)].is_invertible():
            groups.append((start, j))
            start = j + 1
    if k:
        groups.append((start, k))
    return groups


# -- constructors --------------------------------------------------------------------


def interval_module(quiver, field, interval, ideal=None, as_noise=False):
    """The rank-one module supported on an interval of one thread closure."""
    a = quiver.arrow(interval.arrow)
    if as_noise:
        return PwfRep(quiver, field, ValidPartition.coarsest(quiver), noise=[(interval, 1)], ideal=ideal)
    part = ValidPartition.coarsest(quiver).with_interval(interval)
    dims, maps = {}, {}
    chain = [a.source] + [cell_vertex(a.name, i) for i in range(1, len(part.cells(a.name)) + 1)] + [a.target]
    inside = []
    for idx, v in enumerate(chain):
        if idx == 0:
            ok = interval.lo.pos == SRC and interval.lo.closed
        elif idx == len(chain) - 1:
            ok = interval.hi.pos == TGT and interval.hi.closed
        else:
            c = part.cells(a.name)[idx - 1]
            probe = c.lo.pos if c.lo.closed else _inside(c, a.model)
            ok = pos_in(interval, probe, a.model)
        inside.append(ok)
        if ok:
            dims[v] = 1
    one = Matrix.identity(field, 1)
    for j in range(len(chain) - 1):
        if inside[j] and inside[j + 1]:
            maps[chain_arrow(a.name, j) if a.threaded else a.name] = one
    return PwfRep(quiver, field, part, dims, maps, ideal=ideal)


def simple_module(quiver, field, point, ideal=None):
    point = quiver.check_point(point)
    if isinstance(point, Vertex):
        return PwfRep(quiver, field, ValidPartition.coarsest(quiver), {point.name: 1}, ideal=ideal)
    iv = ThreadInterval(point.arrow, Bound(point.coord, True), Bound(point.coord, True))
    return interval_module(quiver, field, iv, ideal)


def direct_sum(m, n):
    if m.quiver is not n.quiver and m.quiver.to_json() != n.quiver.to_json():
        raise ValueError("representations of different thread quivers")
    part = m.partition.refine(n.partition)
    a, b = m.on_partition(part), n.on_partition(part)
    core = a.core.direct_sum(b.core)
    return PwfRep(m.quiver, m.field, part, core.dims, core.maps, m.noise + n.noise, m.ideal)


def direct_sum_all(reps, quiver, field, ideal=None):
    out = PwfRep.zero(quiver, field, ideal)
    for r in reps:
        out = direct_sum(out, r)
    return out


def partition_of_rep(m):
    """Coarsest partition on which m is constant (noise boundaries included)."""
    part = m.core_partition()
    extra = {}
    for iv, _ in m.noise:
        model = m.quiver.arrow(iv.arrow).model
        extra.setdefault(iv.arrow, set()).update(interval_markers(iv, model))
    return part.with_markers(extra)


def dimension_vector(m):
    full = m.with_noise_in_core()
    q = m.quiver
    pieces_ = {}
    for a in q.threaded_arrows():
        pieces_[a.name] = [(c, full.core.dims[cell_vertex(a.name, i)])
                           for i, c in enumerate(full.partition.cells(a.name), 1)]
    return DimensionVector(q, {v: full.core.dims[v] for v in q.vertices}, pieces_)


def support(m):
    """Vertices and maximal intervals where m is nonzero."""
    d = dimension_vector(m)
    out = [Vertex(v) for v in m.quiver.vertices if d.vertices[v]]
    for name, runs in d.merged().items():
        out.extend(iv for iv, k in runs if k)
    return out


def confine(m, region):
    """Confinement of m to an interval of one thread closure."""
    q, f = m.quiver, m.field
    a = q.arrow(region.arrow)
    part = m.partition.with_interval(region)
    base = m.on_partition(part)
    dims, maps = {}, {}
    chain = [a.source] + [cell_vertex(a.name, i) for i in range(1, len(part.cells(a.name)) + 1)] + [a.target]
    inside = []
    for idx, v in enumerate(chain):
        if idx == 0:
            ok = region.lo.pos == SRC and region.lo.closed
        elif idx == len(chain) - 1:
            ok = region.hi.pos == TGT and region.hi.closed
        else:
            c = part.cells(a.name)[idx - 1]
            probe = c.lo.pos if c.lo.closed else _inside(c, a.model)
            ok = pos_in(region, probe, a.model)
        inside.append(ok)
        if ok:
            dims[v] = base.core.dims[v]
    for j in range(len(chain) - 1):
        if inside[j] and inside[j + 1]:
            name = chain_arrow(a.name, j) if a.threaded else a.name
            maps[name] = base.core.maps[name]
    noise = []
    for iv, mult in m.noise:
        if iv.arrow == a.name:
            cut = intersect(iv, region, a.model)
            if cut is not None:
                noise.append((cut, mult))
    return PwfRep(q, f, part, dims, maps, noise, m.ideal)


# -- validation ---------------------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool = True
    violations: list = dc_field(default_factory=list)

    def add(self, message):
        self.ok = False
        self.violations.append(message)


def _noise_partition(m):
    extra = {}
    for iv, _ in m.noise:
        model = m.quiver.arrow(iv.arrow).model
        extra.setdefault(iv.arrow, set()).update(interval_markers(iv, model))
    return m.partition.with_markers(extra)


def _realize(q, f, xs, ys, ideal):
    """Move the ends of f to witness points where it actually lies in the ideal."""
    for a in xs:
        for b in reversed(ys):
            try:
                g = PathLike(q.check_point(a), q.check_point(b), f.path)
            except ValueError:
                continue
            if g.is_pure and q.arrow(a.arrow).model.key(a.coord) > q.arrow(b.arrow).model.key(b.coord):
                continue
            if ideal.monomial_dead(q, g):
                return g
    return f


def validate(m, ideal=None, cap=DEFAULT_CAP):
    """Check that m vanishes on the ideal.

    m is constant on the cells of its partition, so it kills the ideal iff
    it kills the completion of the ideal along that partition; the latter
    is tested on the sample points, one per cell.
    """
    ideal = ideal if ideal is not None else m.ideal
    q = m.quiver
    rep = ValidationReport()
    for iv, _ in m.noise:
        if iv.touches_vertex():
            rep.add(f"noise interval {iv} touches a vertex")
    for bad in m.core.violated_relations():
        rep.add(f"core relation {bad} does not vanish")
    part = _noise_partition(m)
    smp = sample(part).as_dict()
    cells = {}
    for name, p in smp.items():
        if isinstance(p, Inner):
            cells[p] = part.cell_of(p)
    pts = sorted(smp.values(), key=lambda p: isinstance(p, Vertex))
    vanishes = lambda f: m.eval_map(f).is_zero()
    for x in pts:
        if m.eval(x) == 0:
            continue
        for y in pts:
            if m.eval(y) == 0:
                continue
            lo = cells[x].lo if x in cells else None
            hi = cells[y].hi if y in cells else None
            for f in monomials(q, x, y, vanishes, cap):
                if ideal.monomial_dead(q, f, lo, hi):
                    xs = _cell_points(q, cells, x)
                    ys = _cell_points(q, cells, y)
                    g = _realize(q, f, xs, ys, ideal)
                    rep.add(f"nonzero on {format_pathlike(q, g)}")
    fld = m.field
    for r in ideal.linear_relations:
        acc = None
        for c, t in r.terms:
            mat = m.eval_map(t).scale(fld.from_fraction(c))
            acc = mat if acc is None else acc + mat
        if acc is not None and not acc.is_zero():
            rep.add(f"linear relation at {r.source}->{r.target} does not vanish")
    return rep


def _cell_points(q, cells, p):
    if p not in cells:
        return [p]
    model = q.arrow(p.arrow).model
    return [Inner(p.arrow, c) for c in cell_witnesses(cells[p], model)]
