"""Barcodes, the noise split, Krull-Schmidt splitting and the full pipeline."""

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ExtendField
from .exactla import (ExtensionField, FiniteAlgebra, Matrix, PrimeField,
                      Reducer, rref, split_idempotent)
from .order import SRC, TGT, Bound, ThreadInterval
from .partition import cell_vertex, chain_arrow, sample, sampled_bound_quiver
from .rep import FiniteQuiverRep, PwfRep, partition_of_rep
from .transport import hom_space, induce, restrict


# -- one thread ---------------------------------------------------------------------


def thread_chain(m, arrow):
    """Dimensions and maps of m along the closure of one arrow, vertices included."""
    a = m.quiver.arrow(arrow)
    k = len(m.partition.cells(arrow))
    names = [a.source] + [cell_vertex(arrow, i) for i in range(1, k + 1)] + [a.target]
    dims = [m.core.dims[v] for v in names]
    if a.threaded:
        maps = [m.core.maps[chain_arrow(arrow, j)] for j in range(k + 1)]
    else:
        maps = [m.core.maps[arrow]]
    return names, dims, maps


def rank_barcode(dims, maps):
    """Bars (i, j) -> multiplicity of a linear chain, by inclusion-exclusion of ranks."""
    n = len(dims)
    if not n:
        return {}
    f = maps[0].field if maps else None

    composite = {}
    for i in range(n):
        m = None
        for j in range(i, n):
            if j == i:
                composite[(i, j)] = dims[i]
                m = Matrix.identity(f, dims[i]) if f is not None else None
                continue
            m = maps[j - 1] @ m
            composite[(i, j)] = m.rank()

    def r(i, j):
        if i < 0 or j >= n or i > j:
            return 0
        return composite[(i, j)]

    bars = {}
    for i in range(n):
        for j in range(i, n):
            mult = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
            if mult:
                bars[(i, j)] = mult
    return bars


def _bar_interval(m, arrow, i, j):
    cells = m.partition.cells(arrow)
    k = len(cells)
    lo = Bound(SRC, True) if i == 0 else Bound(TGT, True) if i == k + 1 else cells[i - 1].lo
    hi = Bound(TGT, True) if j == k + 1 else Bound(SRC, True) if j == 0 else cells[j - 1].hi
    return ThreadInterval(arrow, lo, hi)


def support_arrow(m):
    """The single arrow whose closure carries m (None if m lives on vertices only)."""
    arrows = set()
    for v, d in m.core.dims.items():
        if d and v not in m.quiver.vertices:
            arrows.add(v.rsplit(".", 1)[0])
    arrows.update(iv.arrow for iv, _ in m.noise)
    for a, mat in m.core.maps.items():
        if mat.nrows and mat.ncols and not mat.is_zero():
            arrows.add(a.rsplit(":", 1)[0])
    if len(arrows) > 1:
        raise ValueError(f"support meets several arrows: {sorted(arrows)}")
    return arrows.pop() if arrows else None


def barcode(m, arrow=None):
    """Interval decomposition of a representation confined to one thread closure."""
    full = m.with_noise_in_core()
    arrow = arrow or support_arrow(full)
    if arrow is None:
        out = []
        for v, d in full.core.dims.items():
            if d:
                out.append((v, d))
        return out
    names, dims, maps = thread_chain(full, arrow)
    bars = rank_barcode(dims, maps)
    out = [(_bar_interval(full, arrow, i, j), mult) for (i, j), mult in bars.items()]
    model = m.quiver.arrow(arrow).model
    out.sort(key=lambda t: t[0].key(model))
    return out


def interval_basis(dims, maps):
    """Bars of a chain together with compatible basis vectors.

    Returns a list of (birth, death, vectors) with vectors[t] in position
    birth + t, each mapped onto the next one by the chain maps and the last
    one to zero.  Older bars win when images become dependent; the younger
    bar is corrected along its whole history so that it dies exactly.
    """
    n = len(dims)
    if not n:
        return []
    f = maps[0].field if maps else None
    live = []
    done = []

    def newborn(pos, images):
        d = dims[pos]
        if f is None:
            return [[None] * 0 for _ in range(d)]
        basis = list(images)
        out = []
        for e in range(d):
            v = tuple(f.one if i == e else f.zero for i in range(d))
            trial = basis + [v]
            if rref(Matrix(f, trial, d)).rank == len(trial):
                basis.append(v)
                out.append(v)
        return out

    for v in newborn(0, []):
        live.append([0, [v]])
    for j in range(n - 1):
        a = maps[j]
        survivors = []
        images = []
        for bar in sorted(live, key=lambda b: b[0]):
            img = _apply(a, bar[1][-1])
            if images:
                red = Reducer(f, images, dims[j + 1])
                if red.contains(img):
                    coeffs = red.coordinates(img)
                    # subtract the same combination of older bars all along the history
                    for c, older in zip(coeffs, survivors):
                        if f.is_zero(c):
                            continue
                        shift = bar[0] - older[0]
                        for t in range(len(bar[1])):
                            bar[1][t] = tuple(f.sub(x, f.mul(c, y)) for x, y in zip(bar[1][t], older[1][shift + t]))
                    done.append((bar[0], j, bar[1]))
                    continue
            elif all(f.is_zero(x) for x in img):
                done.append((bar[0], j, bar[1]))
                continue
            survivors.append(bar)
            images.append(img)
        for bar, img in zip(survivors, images):
            bar[1].append(img)
        live = survivors + [[j + 1, [v]] for v in newborn(j + 1, images)]
    for bar in live:
        done.append((bar[0], n - 1, bar[1]))
    done.sort(key=lambda b: (b[0], b[1]))
    return done


def _apply(m, v):
    f = m.field
    return tuple(sum_(f, [f.mul(r[k], v[k]) for k in range(len(v))]) for r in m.rows)


def sum_(f, xs):
    acc = f.zero
    for x in xs:
        acc = f.add(acc, x)
    return acc


def noise_split(m):
    """Split off every interval summand that avoids the vertices.

    Returns (noise free part, noise list).  Other arrows only meet a thread
    at its end vertices, which noise bars never reach, so dropping the
    noise bars' basis vectors leaves a direct summand.
    """
    q, f = m.quiver, m.field
    dims = dict(m.core.dims)
    maps = dict(m.core.maps)
    noise = list(m.noise)
    for a in q.threaded_arrows():
        names, ds, ms = thread_chain(m, a.name)
        k = len(names) - 2
        bars = interval_basis(ds, ms)
        keep = {i: [] for i in range(1, k + 1)}
        drop = {i: [] for i in range(1, k + 1)}
        for b, d, vecs in bars:
            is_noise = b >= 1 and d <= k
            if is_noise:
                noise.append((_bar_interval(m, a.name, b, d), 1))
            for t, v in enumerate(vecs):
                pos = b + t
                if 1 <= pos <= k:
                    (drop if is_noise else keep)[pos].append(v)
        if not any(drop.values()):
            continue
        change = {}
        for i in range(1, k + 1):
            cols = keep[i] + drop[i]
            change[i] = (Matrix.from_columns(f, cols, ds[i]), len(keep[i]))
        for i in range(1, k + 1):
            dims[names[i]] = change[i][1]
        for j in range(k + 1):
            name = chain_arrow(a.name, j)
            mat = ms[j]
            if j >= 1:
                basis, kk = change[j]
                mat = mat @ basis.select_columns(list(range(kk)))
            if j + 1 <= k:
                basis, kk = change[j + 1]
                mat = basis.inverse() @ mat
                mat = mat.select_rows(list(range(kk)))
            maps[name] = mat
    nf = PwfRep(q, f, m.partition, dims, maps, (), m.ideal)
    return nf, _merge(noise)


def _merge(noise):
    counts = {}
    for iv, k in noise:
        counts[iv] = counts.get(iv, 0) + k
    return sorted(counts.items(), key=lambda t: (t[0].arrow, str(t[0])))


# -- Krull-Schmidt ---------------------------------------------------------------------


def end_algebra(x, homs=None):
    """End(x) as a FiniteAlgebra together with its basis homomorphisms."""
    f = x.field
    homs = homs if homs is not None else hom_space(x, x)
    vs = [v for v in x.quiver.vertices if x.dims[v]]
    flat = [tuple(a for v in vs for a in h[v].flat()) for h in homs]
    length = sum(x.dims[v] ** 2 for v in vs)
    blocks = [[h[v] for v in vs] for h in homs]
    fast = _fast_table(x, vs, flat, length)
    if fast is not None:
        table, unit = fast
        return FiniteAlgebra(f, table, unit, blocks=blocks), homs
    red = Reducer(f, flat, length)
    table = []
    for h1 in homs:
        row = []
        for h2 in homs:
            prod = tuple(a for v in vs for a in (h1[v] @ h2[v]).flat())
            row.append(red.coordinates(prod))
        table.append(row)
    ident = tuple(a for v in vs for a in Matrix.identity(f, x.dims[v]).flat())
    unit = red.coordinates(ident)
    return FiniteAlgebra(f, table, unit, blocks=blocks), homs


def _fast_table(x, vs, flat, length, budget=20_000_000):
    """Structure constants over a prime field with numpy.

    Hom bases come out of a reduced kernel computation, so each basis vector
    is the only one that is nonzero at some coordinate; coordinates of an
    element of the span are then read off at those positions.
    """
    f = x.field
    n = len(flat)
    if not isinstance(f, PrimeField) or not n or n * n * length > budget:
        return None
    b = np.array(flat, dtype=np.int64).reshape(n, length)
    nz = b != 0
    single = (nz.sum(axis=0) == 1) & (b.max(axis=0) == 1)
    cols = []
    for i in range(n):
        hit = np.flatnonzero(single & nz[i])
        if not hit.size:
            return None
        cols.append(int(hit[0]))
    p = f.p
    prods = np.zeros((n, n, len(cols)), dtype=np.int64)
    off = 0
    want = np.array(cols)
    for v in vs:
        d = x.dims[v]
        lo, hi = off, off + d * d
        sel = (want >= lo) & (want < hi)
        if sel.any():
            h = b[:, lo:hi].reshape(n, d, d)
            pr = np.einsum("iab,jbc->ijac", h, h).reshape(n, n, d * d) % p
            prods[:, :, sel] = pr[:, :, want[sel] - lo]
        off = hi
    ident = np.concatenate([np.eye(x.dims[v], dtype=np.int64).reshape(-1) for v in vs])
    return prods.tolist(), ident[want].tolist()


def _image_summand(x, hom):
    """The image of an idempotent endomorphism as a representation, with its inclusion."""
    f = x.field
    bases = {}
    for v in x.quiver.vertices:
        m = hom[v]
        if not m.nrows:
            bases[v] = Matrix.zero(f, 0, 0)
            continue
        red = rref(m.transpose())
        rows = [red.reduced.rows[i] for i in range(red.rank)]
        bases[v] = Matrix.from_columns(f, rows, m.nrows)
    dims = {v: bases[v].ncols for v in x.quiver.vertices}
    maps = {}
    for a, (s, t) in x.quiver.arrows.items():
        img = x.maps[a] @ bases[s]
        bt = bases[t]
        if not bt.ncols or not img.ncols:
            maps[a] = Matrix.zero(f, dims[t], dims[s])
            continue
        # bt has full column rank; read coordinates on its pivot rows
        sub = bt.select_rows([_pivot_rows(bt)[i] for i in range(bt.ncols)])
        maps[a] = sub.inverse() @ img.select_rows(_pivot_rows(bt))
    return FiniteQuiverRep(x.quiver, f, dims, maps, check=False)


def _pivot_rows(b):
    red = rref(b.transpose())
    return list(red.pivots)


def _extend(x, exc):
    base = x.field
    if not isinstance(base, PrimeField) or exc.modulus is None:
        return None
    ext = ExtensionField(base.p, exc.modulus)
    return x.map_field(ext, ext.embed)


def krs(x, seed=0, max_depth=64):
    """Indecomposable summands of x (each with local endomorphism ring)."""
    if x.total_dim == 0:
        return []
    out = []
    stack = [x]
    while stack:
        cur = stack.pop()
        if cur.total_dim == 0:
            continue
        alg, homs = end_algebra(cur)
        try:
            e = split_idempotent(alg, seed)
        except ExtendField as exc:
            bigger = _extend(cur, exc)
            if bigger is None:
                out.append(cur)
                continue
            stack.append(bigger)
            continue
        if e is None:
            out.append(cur)
            continue
        f = cur.field
        hom_e = _combine(cur, homs, e)
        hom_1e = {v: Matrix.identity(f, cur.dims[v]) - hom_e[v] for v in cur.quiver.vertices}
        stack.append(_image_summand(cur, hom_e))
        stack.append(_image_summand(cur, hom_1e))
    return out


def _combine(x, homs, coeffs):
    f = x.field
    out = {}
    for v in x.quiver.vertices:
        acc = Matrix.zero(f, x.dims[v], x.dims[v])
        for c, h in zip(coeffs, homs):
            if not f.is_zero(c):
                acc = acc + h[v].scale(c)
        out[v] = acc
    return out


def fingerprint(x, max_len=None):
    """Isomorphism invariant: dimension vector plus ranks of all nonzero-path composites."""
    bq = x.quiver
    max_len = max_len or len(bq.arrows) + 1
    ranks = []
    for u in bq.vertices:
        if not x.dims[u]:
            continue
        stack = [(u, ())]
        while stack:
            v, path = stack.pop()
            for a in bq.out_arrows(v):
                p = path + (a,)
                if len(p) > max_len:
                    continue
                r = x.path_matrix(u, p).rank()
                if r:
                    ranks.append((p, r))
                    stack.append((bq.target(a), p))
    return (x.dim_vector(), tuple(sorted(ranks)))


def isomorphic(x, y, seed=0):
    """Isomorphism test for indecomposables via a random homomorphism."""
    if x.dim_vector() != y.dim_vector():
        return False
    homs = hom_space(x, y)
    if not homs:
        return x.total_dim == 0
    rng = random.Random(seed)
    f = x.field
    for _ in range(3):
        coeffs = [f.random_element(rng) for _ in homs]
        ok = True
        for v in x.quiver.vertices:
            if not x.dims[v]:
                continue
            acc = Matrix.zero(f, y.dims[v], x.dims[v])
            for c, h in zip(coeffs, homs):
                acc = acc + h[v].scale(c)
            if not acc.is_invertible():
                ok = False
                break
        if ok:
            return True
    return False


@dataclass
class SummandClass:
    rep: FiniteQuiverRep
    multiplicity: int
    key: tuple

    def label(self):
        dims = ",".join(f"{v}:{d}" for v, d in zip(self.rep.quiver.vertices, self.key[1]) if d)
        return f"[{dims}]"


def _sort_key(x):
    fp = fingerprint(x)
    return (x.total_dim, fp[0], fp[1])


def canonical_krs(x, seed=0):
    """Summands grouped up to isomorphism, in a seed-independent order."""
    classes = []
    for s in krs(x, seed):
        for c in classes:
            if c.rep.field == s.field and c.key == _sort_key(s) and isomorphic(c.rep, s, seed):
                c.multiplicity += 1
                break
        else:
            classes.append(SummandClass(s, 1, _sort_key(s)))
    classes.sort(key=lambda c: c.key)
    return classes


# -- the pipeline ---------------------------------------------------------------------


@dataclass
class Decomposition:
    noise: list
    summands: list
    partition: object = None
    sampled: object = None
    extended: bool = False

    def multiset(self):
        return ([(iv, k) for iv, k in self.noise],
                [(c.key, c.multiplicity) for c in self.summands])


@dataclass
class InducedSummand:
    module: PwfRep
    finite: FiniteQuiverRep
    multiplicity: int
    key: tuple


def decompose(m, seed=0):
    """Noise intervals plus induced indecomposables whose sum is m."""
    nf, noise = noise_split(m)
    part = partition_of_rep(nf)
    nf = nf.normalized()
    if nf.partition != part:
        nf = nf.on_partition(part)
    smp = sample(part)
    sbq = sampled_bound_quiver(m.quiver, m.ideal, part, smp)
    x = restrict(nf, smp, m.ideal, sbq)
    summands = []
    extended = False
    for c in canonical_krs(x, seed):
        rep = c.rep
        if rep.field != m.field:
            extended = True
            summands.append(InducedSummand(None, rep, c.multiplicity, c.key))
            continue
        summands.append(InducedSummand(induce(rep, part, smp, m.quiver, m.ideal, sbq), rep, c.multiplicity, c.key))
    return Decomposition(noise, summands, part, sbq, extended)


# -- drawing --------------------------------------------------------------------------------


def _num(q):
    """Decimal text of a rational with two digits, computed exactly."""
    q = Fraction(q)
    scaled = round(q * 100)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    return f"{sign}{scaled // 100}.{scaled % 100:02d}"


def _axis(model, bars):
    """Rational range drawn for a thread: its ends, or the finite breakpoints padded by one."""
    if model.kind == "finite":
        return Fraction(0), Fraction(model.n + 1)
    if model.kind == "empty":
        return Fraction(0), Fraction(1)
    inner = [b.pos for iv, _ in bars for b in (iv.lo, iv.hi) if b.pos not in (SRC, TGT)]
    lo = model.lo if model.lo is not None else (min(inner, default=Fraction(0)) - 1)
    hi = model.hi if model.hi is not None else (max(inner, default=Fraction(0)) + 1)
    if model.lo is None and model.hi is not None and lo >= hi:
        lo = hi - 1
    if model.hi is None and model.lo is not None and hi <= lo:
        hi = lo + 1
    return Fraction(lo), Fraction(hi)


def barcode_svg(bars, model, title=""):
    """One horizontal bar per interval; filled caps are closed ends, hollow caps open ones."""
    lo, hi = _axis(model, bars)
    width, left, right, row = 480, 40, 40, 24
    span = hi - lo
    rows = [(iv, k) for iv, k in bars for _ in range(k)]
    height = row * (len(rows) + 2)

    def x(pos):
        v = lo if pos == SRC else hi if pos == TGT else Fraction(pos)
        return left + (v - lo) * (width - left - right) / span

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    if title:
        out.append(f'<text x="{left}" y="{row - 8}" font-size="12">{title}</text>')
    base = height - row // 2
    out.append(f'<line x1="{left}" y1="{base}" x2="{width - right}" y2="{base}" stroke="#888"/>')
    out.append(f'<text x="{left}" y="{base - 4}" font-size="10">{model.label(SRC)}</text>')
    out.append(f'<text x="{width - right}" y="{base - 4}" font-size="10" text-anchor="end">{model.label(TGT)}</text>')
    for i, (iv, _) in enumerate(rows):
        y = row * (i + 1) + row // 2
        x1, x2 = x(iv.lo.pos), x(iv.hi.pos)
        out.append(f'<line x1="{_num(x1)}" y1="{y}" x2="{_num(x2)}" y2="{y}" stroke="black" stroke-width="3"/>')
        for pos, closed in ((x1, iv.lo.closed), (x2, iv.hi.closed)):
            fill = "black" if closed else "white"
            out.append(f'<circle cx="{_num(pos)}" cy="{y}" r="4" fill="{fill}" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
