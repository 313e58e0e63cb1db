"""Restriction to a sample and induction back along a partition.

Restriction reads a cell-constant representation at the sample points;
induction spreads a representation of the sampled bound quiver constantly
over each cell.  With representations stored on chain quivers both are
bookkeeping on data, so restrict(induce(X)) is X on the nose.
"""

from .errors import IncompatiblePartition, RelationViolation
from .exactla import Matrix, rref
from .ideal import IdealSpec
from .partition import (BoundQuiver, cell_vertex, cell_witnesses, chain_arrow,
                        sampled_bound_quiver)
from .rep import FiniteQuiverRep, PwfRep, partition_of_rep


def restrict(m, smp, ideal=None, sbq=None):
    """The representation of the sampled bound quiver read off at the sample."""
    ideal = ideal if ideal is not None else m.ideal
    part = smp.partition
    full = m.with_noise_in_core()
    if part.refines(full.partition):
        base = full.on_partition(part)
    elif part.refines(partition_of_rep(full)):
        base = full.normalized().on_partition(part)
    else:
        raise IncompatiblePartition("the sample's partition does not refine the partition of the representation")
    sbq = sbq or sampled_bound_quiver(m.quiver, ideal, part, smp)
    core = base.core
    for v in sbq.dead_vertices:
        if core.dims[v]:
            raise RelationViolation(f"nonzero at {v}, where the completed ideal kills the identity")
    for a in sbq.dead_arrows:
        if not core.maps[a].is_zero():
            raise RelationViolation(f"nonzero on {a}, which the completed ideal kills")
    return FiniteQuiverRep(sbq.bound, m.field, {v: core.dims[v] for v in sbq.bound.vertices},
                           {a: core.maps[a] for a in sbq.bound.arrows})


def induce(x, partition, smp=None, quiver=None, ideal=None, sbq=None):
    """The cell-constant representation whose restriction is x."""
    quiver = quiver or partition.quiver
    ideal = ideal or IdealSpec()
    sbq = sbq or sampled_bound_quiver(quiver, ideal, partition, smp)
    if x.quiver != sbq.bound:
        raise RelationViolation("representation is not over the sampled bound quiver")
    x.check_relations()
    return PwfRep(quiver, x.field, partition, dict(x.dims), dict(x.maps), ideal=ideal)


# -- homomorphisms ----------------------------------------------------------------------


def hom_space(x, y):
    """Basis of Hom(x, y) as dicts vertex -> matrix, by solving the commuting system."""
    bq, f = x.quiver, x.field
    offs, n = {}, 0
    for v in bq.vertices:
        offs[v] = n
        n += y.dims[v] * x.dims[v]
    if n == 0:
        return []
    rows = []
    for a, (s, t) in bq.arrows.items():
        ya, xa = y.maps[a].rows, x.maps[a].rows
        ds, dt = x.dims[s], x.dims[t]
        es, et = y.dims[s], y.dims[t]
        for i in range(et):
            for j in range(ds):
                row = [f.zero] * n
                nz = False
                # (y_a phi_s)[i, j] = sum_k y_a[i, k] phi_s[k, j]
                for k in range(es):
                    c = ya[i][k]
                    if not f.is_zero(c):
                        idx = offs[s] + k * ds + j
                        row[idx] = f.add(row[idx], c)
                        nz = True
                # (phi_t x_a)[i, j] = sum_l phi_t[i, l] x_a[l, j]
                for l in range(dt):
                    c = xa[l][j]
                    if not f.is_zero(c):
                        idx = offs[t] + i * dt + l
                        row[idx] = f.sub(row[idx], c)
                        nz = True
                if nz:
                    rows.append(row)
    if rows:
        ker = rref(Matrix(f, rows, n)).kernel.columns()
    else:
        ker = [tuple(f.one if i == j else f.zero for i in range(n)) for j in range(n)]
    out = []
    for vec in ker:
        hom = {}
        for v in bq.vertices:
            r, c = y.dims[v], x.dims[v]
            o = offs[v]
            hom[v] = Matrix(f, [vec[o + i * c:o + (i + 1) * c] for i in range(r)], c)
        out.append(hom)
    return out


def hom_dim(x, y):
    return len(hom_space(x, y))


def witness_chain(m):
    """m spread over witness points: several vertices per cell joined by identities."""
    full = m.with_noise_in_core()
    q, f = full.quiver, full.field
    vertices = list(q.vertices)
    arrows, dims, maps = {}, {v: full.core.dims[v] for v in q.vertices}, {}
    for a in q.arrows:
        if not a.threaded:
            arrows[a.name] = (a.source, a.target)
            maps[a.name] = full.core.maps[a.name]
            continue
        prev = a.source
        for i, c in enumerate(full.partition.cells(a.name), 1):
            d = full.core.dims[cell_vertex(a.name, i)]
            pts = cell_witnesses(c, a.model)
            names = [f"{a.name}.{i}#{t}" for t in range(len(pts))]
            vertices.extend(names)
            for nm in names:
                dims[nm] = d
            arrows[chain_arrow(a.name, i - 1)] = (prev, names[0])
            maps[chain_arrow(a.name, i - 1)] = full.core.maps[chain_arrow(a.name, i - 1)]
            for t in range(1, len(names)):
                arrows[f"{a.name}.{i}~{t}"] = (names[t - 1], names[t])
                maps[f"{a.name}.{i}~{t}"] = Matrix.identity(f, d)
            prev = names[-1]
        k = len(full.partition.cells(a.name))
        arrows[chain_arrow(a.name, k)] = (prev, a.target)
        maps[chain_arrow(a.name, k)] = full.core.maps[chain_arrow(a.name, k)]
    return FiniteQuiverRep(BoundQuiver(vertices, arrows), f, dims, maps, check=False)


def pwf_hom_dim(m, n):
    """dim Hom(m, n) between cell-constant representations, on a common refinement."""
    fm, fn = m.with_noise_in_core(), n.with_noise_in_core()
    part = fm.partition.refine(fn.partition)
    a, b = witness_chain(fm.on_partition(part)), witness_chain(fn.on_partition(part))
    return hom_dim(a, b)
