"""Ideals of the path category and their completions along a partition.

An ideal is given by explicit relations plus parametric families of
basis morphisms.  All families are monomial and closed under composition
on either side, so membership of a basis morphism reduces to reading its
itinerary (the stretches it spends inside each thread).

Completion along a partition: a basis morphism from a point of cell X to
a point of cell Y is in the completion iff it lands in the ideal after
stretching its first stretch down to some point of X and its last stretch
up to some point of Y.  Open cell ends are never reached, so conditions
at an open end must hold strictly.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import CellMismatch, NotHomFinite
from .exactla import FiniteAlgebra, Matrix, RationalField, Reducer, is_local, rref
from .order import SRC, TGT, Bound, Inner, ThreadInterval, Vertex
from .pathcat import (DEFAULT_CAP, MorphismCombination, PathLike,
                      compose, compose_basis,
                      make_pathlike, mirror_point, mirror_pos, monomials,
                      pieces)


@dataclass(frozen=True)
class Gap:
    """All segments on ``arrow`` whose length is at least ``c``."""

    arrow: str
    c: Fraction


@dataclass(frozen=True)
class Rect:
    """All ``eta[y<-src] p eta[tgt<-x]`` with x in ``xs`` and y in ``ys``."""

    source_arrow: str
    path: tuple
    target_arrow: str
    xs: ThreadInterval
    ys: ThreadInterval


@dataclass(frozen=True)
class QuadI:
    """Compositions entering a vertex along ``incoming`` and leaving along ``outgoing``."""

    incoming: str
    outgoing: str


@dataclass(frozen=True)
class QuadII:
    """Segments of ``arrow`` passing strictly through the inner point ``at``."""

    arrow: str
    at: object


@dataclass(frozen=True)
class Relation:
    """Explicit relation: rational combination of basis morphisms with common ends."""

    source: object
    target: object
    terms: tuple

    @property
    def is_monomial(self):
        return len(self.terms) == 1


@dataclass(frozen=True)
class _EP:
    arrow: str
    start: object
    end: object
    start_open: bool = False
    end_open: bool = False


def _key(quiver, arrow, pos):
    return quiver.arrow(arrow).model.key(pos)


def _le(quiver, p, t):
    # some actual start point of p is <= t
    ks, kt = _key(quiver, p.arrow, p.start), _key(quiver, p.arrow, t)
    return ks < kt or (ks == kt and not p.start_open)


def _ge(quiver, p, t):
    ke, kt = _key(quiver, p.arrow, p.end), _key(quiver, p.arrow, t)
    return ke > kt or (ke == kt and not p.end_open)


def _extended_pieces(quiver, m, lo=None, hi=None):
    ps = [_EP(p.arrow, p.start, p.end) for p in pieces(quiver, m)]
    if lo is not None and isinstance(m.source, Inner) and ps:
        p = ps[0]
        ps[0] = _EP(p.arrow, lo.pos, p.end, not lo.closed, p.end_open)
    if hi is not None and isinstance(m.target, Inner) and ps:
        p = ps[-1]
        ps[-1] = _EP(p.arrow, p.start, hi.pos, p.start_open, not hi.closed)
    return ps


def _gap_reached(quiver, p, c):
    model = quiver.arrow(p.arrow).model
    a, b = model.value(p.start), model.value(p.end)
    if a is None or b is None:
        return True
    d = b - a
    return d > c if (p.start_open or p.end_open) else d >= c


def _full(p):
    return p.start == SRC and p.end == TGT and not p.start_open and not p.end_open


def _ends_at_vertex(p):
    return p.end == TGT and not p.end_open


def _starts_at_vertex(p):
    return p.start == SRC and not p.start_open


class IdealSpec:
    """Explicit relations plus monomial families."""

    def __init__(self, relations=(), families=()):
        self.relations = tuple(relations)
        self.families = tuple(families)

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.relations and not self.families

    @property
    def monomial_relations(self):
        return [r for r in self.relations if r.is_monomial]

    @property
    def linear_relations(self):
        return [r for r in self.relations if not r.is_monomial]

    def validate(self, quiver):
        """Check family parameters and the radical condition; raise ValueError."""
        for fam in self.families:
            if isinstance(fam, Gap):
                a = quiver.arrow(fam.arrow)
                if not a.threaded:
                    raise ValueError("gap family needs a threaded arrow")
                if fam.c <= 0:
                    raise ValueError("gap threshold must be positive")
            elif isinstance(fam, QuadII):
                if not quiver.arrow(fam.arrow).model.is_inner(fam.at):
                    raise ValueError("quadratic family point must be inner")
            elif isinstance(fam, QuadI):
                if quiver.arrow(fam.incoming).target != quiver.arrow(fam.outgoing).source:
                    raise ValueError("quadratic family arrows do not meet")
            elif isinstance(fam, Rect):
                a, b = quiver.arrow(fam.source_arrow), quiver.arrow(fam.target_arrow)
                v = a.target
                for name in fam.path:
                    e = quiver.arrow(name)
                    if e.source != v:
                        raise ValueError("rectangle path is not a path")
                    v = e.target
                if v != b.source:
                    raise ValueError("rectangle path does not reach the target arrow")
        for r in self.relations:
            for _, m in r.terms:
                if m.is_identity():
                    raise ValueError("relations must lie in the radical")
            if not r.is_monomial:
                if not (isinstance(r.source, Vertex) and isinstance(r.target, Vertex)):
                    raise ValueError("non-monomial relations must start and end at vertices")

    # -- monomial criterion -------------------------------------------------

    def _family_hits(self, quiver, ps):
        for fam in self.families:
            if isinstance(fam, Gap):
                for p in ps:
                    if p.arrow == fam.arrow and _gap_reached(quiver, p, fam.c):
                        return True
            elif isinstance(fam, QuadII):
                for p in ps:
                    if p.arrow != fam.arrow:
                        continue
                    k = _key(quiver, p.arrow, fam.at)
                    if _key(quiver, p.arrow, p.start) < k < _key(quiver, p.arrow, p.end):
                        return True
            elif isinstance(fam, QuadI):
                for p, q in zip(ps, ps[1:]):
                    if (p.arrow == fam.incoming and q.arrow == fam.outgoing
                            and _ends_at_vertex(p) and _starts_at_vertex(q)):
                        return True
            elif isinstance(fam, Rect):
                k = len(fam.path)
                for i in range(len(ps) - k - 1):
                    p, q = ps[i], ps[i + k + 1]
                    if p.arrow != fam.source_arrow or q.arrow != fam.target_arrow:
                        continue
                    if not (_ends_at_vertex(p) and _starts_at_vertex(q)):
                        continue
                    mids = ps[i + 1:i + k + 1]
                    if tuple(x.arrow for x in mids) != fam.path or not all(_full(x) for x in mids):
                        continue
                    xa, ya = fam.xs, fam.ys
                    kx = _key(quiver, p.arrow, xa.hi.pos)
                    ks = _key(quiver, p.arrow, p.start)
                    ok_x = ks < kx or (ks == kx and not p.start_open and xa.hi.closed)
                    ky = _key(quiver, q.arrow, ya.lo.pos)
                    ke = _key(quiver, q.arrow, q.end)
                    ok_y = ke > ky or (ke == ky and not q.end_open and ya.lo.closed)
                    if ok_x and ok_y:
                        return True
        return False

    def _relation_hits(self, quiver, ps):
        for r in self.monomial_relations:
            g = r.terms[0][1]
            if _contains_factor(quiver, ps, g):
                return True
        return False

    def monomial_dead(self, quiver, m, lo=None, hi=None):
        """Is the basis morphism m in the ideal (after stretching to lo/hi)?"""
        ps = _extended_pieces(quiver, m, lo, hi)
        return self._family_hits(quiver, ps) or self._relation_hits(quiver, ps)

    # -- general membership -------------------------------------------------

    def dead_predicate(self, quiver, lo=None, hi=None):
        return lambda m: self.monomial_dead(quiver, m, lo, hi)

    def hom_basis(self, quiver, x, y, cap=DEFAULT_CAP, lo=None, hi=None):
        live = monomials(quiver, x, y, self.dead_predicate(quiver, lo, hi), cap)
        if not self.linear_relations:
            return live
        inst = self._instances(quiver, x, y, live, cap, lo, hi)
        if not inst:
            return live
        red = rref(Matrix(_QF, inst, len(live)))
        piv = set(red.pivots)
        return [m for i, m in enumerate(live) if i not in piv]

    def _instances(self, quiver, x, y, live, cap, lo, hi, field=None):
        fld = field or _QF
        index = {m: i for i, m in enumerate(live)}
        out = []
        dead_src = self.dead_predicate(quiver, lo, None)
        dead_tgt = self.dead_predicate(quiver, None, hi)
        for r in self.linear_relations:
            a, b = r.source, r.target
            try:
                before = monomials(quiver, x, a, dead_src, cap)
                after = monomials(quiver, b, y, dead_tgt, cap)
            except NotHomFinite:
                raise
            for v in before:
                for u in after:
                    vec = [fld.zero] * len(live)
                    for c, t in r.terms:
                        m = compose_basis(quiver, u, compose_basis(quiver, t, v))
                        if m in index:
                            i = index[m]
                            vec[i] = fld.add(vec[i], fld.from_fraction(c))
                    if any(not fld.is_zero(e) for e in vec):
                        out.append(vec)
        return out

    def contains(self, quiver, f, partition=None, cap=DEFAULT_CAP):
        return mem(f, self, quiver, partition, cap)

    # -- bookkeeping ----------------------------------------------------------

    def breakpoints(self, quiver, arrow):
        out = set()
        model = quiver.arrow(arrow).model
        for fam in self.families:
            if isinstance(fam, Gap) and fam.arrow == arrow:
                if model.kind == "dense":
                    if model.lo is not None and model.is_inner(model.lo + fam.c):
                        out.add(model.lo + fam.c)
                    if model.hi is not None and model.is_inner(model.hi - fam.c):
                        out.add(model.hi - fam.c)
                    if model.lo is None and model.hi is None:
                        out.add(Fraction(fam.c))
                else:
                    for v in (1 + fam.c, model.n - fam.c):
                        if model.is_inner(int(v)) and v == int(v):
                            out.add(int(v))
            elif isinstance(fam, QuadII) and fam.arrow == arrow:
                out.add(fam.at)
            elif isinstance(fam, Rect):
                if fam.source_arrow == arrow:
                    for b in (fam.xs.lo, fam.xs.hi):
                        if b.pos not in (SRC, TGT):
                            out.add(b.pos)
                if fam.target_arrow == arrow:
                    for b in (fam.ys.lo, fam.ys.hi):
                        if b.pos not in (SRC, TGT):
                            out.add(b.pos)
        for r in self.relations:
            for p in (r.source, r.target):
                if isinstance(p, Inner) and p.arrow == arrow:
                    out.add(p.coord)
        return out

    def gap_shifts(self, arrow):
        return sorted({fam.c for fam in self.families if isinstance(fam, Gap) and fam.arrow == arrow})

    def opposite(self, quiver):
        """The ideal of the opposite category (quiver is the original one)."""
        fams = []
        for fam in self.families:
            if isinstance(fam, Gap):
                fams.append(fam)
            elif isinstance(fam, QuadII):
                fams.append(QuadII(fam.arrow, mirror_pos(quiver.arrow(fam.arrow).model, fam.at)))
            elif isinstance(fam, QuadI):
                fams.append(QuadI(fam.outgoing, fam.incoming))
            elif isinstance(fam, Rect):
                fams.append(Rect(fam.target_arrow, tuple(reversed(fam.path)), fam.source_arrow,
                                 _mirror_interval(quiver, fam.ys), _mirror_interval(quiver, fam.xs)))
        rels = []
        for r in self.relations:
            terms = tuple((c, _mirror_pathlike(quiver, m)) for c, m in r.terms)
            rels.append(Relation(mirror_point(quiver, r.target), mirror_point(quiver, r.source), terms))
        return IdealSpec(rels, fams)


def _mirror_interval(quiver, iv):
    model = quiver.arrow(iv.arrow).model
    lo = Bound(mirror_pos(model, iv.hi.pos), iv.hi.closed)
    hi = Bound(mirror_pos(model, iv.lo.pos), iv.lo.closed)
    return ThreadInterval(iv.arrow, lo, hi)


def _mirror_pathlike(quiver, m):
    s, t = mirror_point(quiver, m.target), mirror_point(quiver, m.source)
    path = None if m.path is None else tuple(reversed(m.path))
    return PathLike(s, t, path)


def _contains_factor(quiver, ps, g):
    """Does a monomial with stretches ps factor through the monomial g?"""
    gps = pieces(quiver, g)
    if not gps:
        return False
    if g.is_pure:
        gp = gps[0]
        for p in ps:
            if p.arrow == gp.arrow and _le(quiver, p, gp.start) and _ge(quiver, p, gp.end):
                return True
        return False
    k = len(gps)
    for i in range(len(ps) - k + 1):
        ok = True
        for j, gp in enumerate(gps):
            p = ps[i + j]
            if p.arrow != gp.arrow:
                ok = False
                break
            first, last = j == 0, j == k - 1
            if first and isinstance(g.source, Inner):
                if not (_le(quiver, p, gp.start) and _ends_at_vertex(p)):
                    ok = False
                    break
            elif not _starts_at_vertex(p):
                ok = False
                break
            if last and isinstance(g.target, Inner):
                if not _ge(quiver, p, gp.end):
                    ok = False
                    break
            elif not _ends_at_vertex(p):
                ok = False
                break
        if ok:
            return True
    return False


_QF = RationalField()


def _cell_bounds(partition, quiver, x, y):
    lo = hi = None
    if partition is not None:
        if isinstance(x, Inner):
            lo = partition.cell_of(x).lo
        if isinstance(y, Inner):
            hi = partition.cell_of(y).hi
    return lo, hi


def mem(f, ideal, quiver, partition=None, cap=DEFAULT_CAP):
    """Is the combination f in the ideal (or in its completion along partition)?"""
    if f.is_zero():
        return True
    x, y = f.source, f.target
    lo, hi = _cell_bounds(partition, quiver, x, y)
    fld = f.field
    residual = {m: c for m, c in f.terms.items() if not ideal.monomial_dead(quiver, m, lo, hi)}
    if not residual:
        return True
    if not ideal.linear_relations:
        return False
    live = monomials(quiver, x, y, ideal.dead_predicate(quiver, lo, hi), cap)
    inst = ideal._instances(quiver, x, y, live, cap, lo, hi, field=fld)
    index = {m: i for i, m in enumerate(live)}
    target = [fld.zero] * len(live)
    for m, c in residual.items():
        if m not in index:
            return False
        target[index[m]] = c
    if not inst:
        return False
    red = Reducer(fld, _independent(fld, inst, len(live)), len(live))
    return red.contains(target)


def _independent(fld, vectors, n):
    red = rref(Matrix(fld, vectors, n))
    return [red.reduced.rows[i] for i in range(red.rank)]


def p_equivalent(f, g, ideal, quiver, partition, cap=DEFAULT_CAP):
    """Do f and g agree after stretching both to common points of their cells?"""
    fx, gx = partition.cell_of(f.source), partition.cell_of(g.source)
    fy, gy = partition.cell_of(f.target), partition.cell_of(g.target)
    if fx != gx or fy != gy:
        raise CellMismatch("sources or targets lie in different cells")
    z = _extreme(quiver, f.source, g.source, low=True)
    w = _extreme(quiver, f.target, g.target, low=False)
    fld = f.field

    def stretch(h):
        pre = MorphismCombination.basis(fld, make_pathlike(quiver, z, h.source))
        post = MorphismCombination.basis(fld, make_pathlike(quiver, h.target, w))
        return compose(quiver, post, compose(quiver, h, pre))

    return mem(stretch(f) - stretch(g), ideal, quiver, partition, cap)


def _extreme(quiver, p, q, low):
    if p == q or isinstance(p, Vertex):
        return p
    model = quiver.arrow(p.arrow).model
    kp, kq = model.key(p.coord), model.key(q.coord)
    if low:
        return p if kp <= kq else q
    return p if kp >= kq else q


# -- admissibility ---------------------------------------------------------------


@dataclass
class AdmissibilityReport:
    in_radical: bool = True
    hom_finite: bool = True
    local: bool = True
    admissible: bool = False
    failures: list = dc_field(default_factory=list)

    @property
    def weakly_admissible(self):
        return self.in_radical and self.hom_finite and self.local


def _steps(quiver, p):
    """Number of irreducible steps in a stretch (None when unbounded)."""
    model = quiver.arrow(p.arrow).model
    if model.kind == "empty":
        return 1
    if model.kind == "dense":
        return None if p.start != p.end else 0
    return int(model.value(p.end) - model.value(p.start))


def in_radical_squared(quiver, m):
    total = 0
    for p in pieces(quiver, m):
        s = _steps(quiver, p)
        if s is None:
            return True
        total += s
    return total >= 2


def probe_points(quiver, ideal):
    pts = [Vertex(v) for v in quiver.vertices]
    for a in quiver.threaded_arrows():
        model = a.model
        bps = sorted(ideal.breakpoints(quiver, a.name))
        if model.kind == "finite":
            cand = set(bps) | {1, model.n, (model.n + 1) // 2}
            pts.extend(Inner(a.name, c) for c in sorted(cand) if model.is_inner(c))
            continue
        cuts = [model.lo] + bps + [model.hi]
        for b in bps:
            pts.append(Inner(a.name, b))
        for u, v in zip(cuts, cuts[1:]):
            pts.append(Inner(a.name, _between(u, v)))
    return pts


def _between(u, v):
    if u is None and v is None:
        return Fraction(0)
    if u is None:
        return v - 1
    if v is None:
        return u + 1
    return (u + v) / 2


def end_algebra(quiver, ideal, x, field, cap=DEFAULT_CAP):
    basis = ideal.hom_basis(quiver, x, x, cap=cap)
    if ideal.linear_relations:
        raise NotImplementedError("endomorphism algebras with non-monomial relations")
    index = {m: i for i, m in enumerate(basis)}
    n = len(basis)
    table = []
    for a in basis:
        row = []
        for b in basis:
            prod = compose_basis(quiver, a, b)
            vec = [field.zero] * n
            if prod in index and not ideal.monomial_dead(quiver, prod):
                vec[index[prod]] = field.one
            row.append(vec)
        table.append(row)
    unit = [field.zero] * n
    ident = PathLike(x, x, None if isinstance(x, Inner) else ())
    if ident in index:
        unit[index[ident]] = field.one
    return FiniteAlgebra(field, table, unit)


def check_weakly_admissible(ideal, quiver, field, cap=DEFAULT_CAP, probes=None):
    rep = AdmissibilityReport()
    try:
        ideal.validate(quiver)
    except ValueError as exc:
        rep.in_radical = False
        rep.failures.append(f"radical: {exc}")
    pts = probes if probes is not None else probe_points(quiver, ideal)
    for x in pts:
        for y in pts:
            try:
                ideal.hom_basis(quiver, x, y, cap=cap)
            except NotHomFinite as exc:
                rep.hom_finite = False
                rep.failures.append(f"NotHomFinite: Hom({x},{y}) witness {'·'.join(exc.witness or ())}")
                break
        if not rep.hom_finite:
            break
    if rep.hom_finite and not ideal.linear_relations:
        for x in pts:
            alg = end_algebra(quiver, ideal, x, field, cap)
            if not is_local(alg):
                rep.local = False
                rep.failures.append(f"End({x}) is not local")
    adm = True
    for fam in ideal.families:
        if isinstance(fam, Gap):
            model = quiver.arrow(fam.arrow).model
            if model.kind == "finite" and fam.c < 2:
                adm = False
    for r in ideal.relations:
        for _, m in r.terms:
            if not in_radical_squared(quiver, m):
                adm = False
    rep.admissible = adm and rep.weakly_admissible
    return rep
