"""Random generators and independent oracles shared by the test modules."""

from fractions import Fraction
from pathlib import Path

from threadrep.document import load
from threadrep.exactla import Matrix, PrimeField
from threadrep.order import OrderModel
from threadrep.partition import ValidPartition, chain_quiver
from threadrep.pathcat import ThreadQuiver
from threadrep.rep import FiniteQuiverRep, PwfRep

FIXTURES = Path(__file__).parent / "fixtures"
P = 32003
FLD = PrimeField(P)


def fixture(name):
    return load(FIXTURES / f"{name}.json")


def fixture_path(name):
    return str(FIXTURES / f"{name}.json")


def a2(lo=0, hi=1):
    return ThreadQuiver(["0", "1"], [("a", "0", "1", OrderModel.dense(lo, hi))])


def random_matrix(rng, rows, cols, density=0.7, field=FLD):
    data = [[field.from_int(rng.randrange(1, 7)) if rng.random() < density else field.zero
             for _ in range(cols)] for _ in range(rows)]
    return Matrix(field, data, cols)


def random_coords(rng, model, k):
    """k distinct rationals inside a dense thread."""
    lo = model.lo if model.lo is not None else Fraction(-4)
    hi = model.hi if model.hi is not None else Fraction(4)
    pts = set()
    while len(pts) < k:
        pts.add(lo + (hi - lo) * Fraction(rng.randrange(1, 24), 24))
    return sorted(pts)


def random_partition(quiver, rng, max_breaks=3):
    markers = {}
    for a in quiver.threaded_arrows():
        if a.model.is_dense:
            pts = random_coords(rng, a.model, rng.randint(0, max_breaks))
            markers[a.name] = {(p, rng.choice("+-")) for p in pts}
            if pts and rng.random() < 0.3:
                p = rng.choice(pts)
                markers[a.name] |= {(p, "+"), (p, "-")}
        else:
            cuts = rng.sample(range(1, a.model.n + 1), min(a.model.n, rng.randint(0, max_breaks)))
            markers[a.name] = {(c, "+") for c in cuts if c < a.model.n}
    return ValidPartition.from_markers(quiver, markers)


def random_finite(bq, rng, max_dim=3, field=FLD, density=0.7):
    """Random representation of an unbound quiver (no relations are imposed)."""
    dims = {v: rng.randint(0, max_dim) for v in bq.vertices}
    maps = {a: random_matrix(rng, dims[t], dims[s], density, field) for a, (s, t) in bq.arrows.items()}
    return FiniteQuiverRep(bq, field, dims, maps)


def random_pwf(quiver, rng, max_dim=3, max_breaks=3, partition=None, field=FLD):
    part = partition or random_partition(quiver, rng, max_breaks)
    core = random_finite(chain_quiver(quiver, part), rng, max_dim, field)
    return PwfRep(quiver, field, part, core.dims, core.maps)


# -- oracle: persistence by column reduction with the elder rule --------------------------------


def _mat_ints(m):
    return [[int(x) % P for x in row] for row in m.rows]


def _reduce(vec, pivots):
    """Residual of vec against pivot vectors keyed by their leading index."""
    vec = list(vec)
    for i in range(len(vec)):
        if vec[i] and i in pivots:
            pv, _ = pivots[i]
            c = vec[i] * pow(pv[i], P - 2, P) % P
            vec = [(x - c * y) % P for x, y in zip(vec, pv)]
    return vec


def elder_barcode(dims, maps):
    """Bars (birth, death) of a chain V0 -> V1 -> ... with birth/death as chain positions.

    Each basis vector carries its birth.  At every step the images are
    reduced oldest first; a vector whose image becomes dependent on older
    images dies there (elder rule), the rest survive and new vectors are born
    to fill the next space.
    """
    n = len(dims)
    mats = [_mat_ints(m) for m in maps]
    basis = [([1 if i == j else 0 for i in range(dims[0])], 0) for j in range(dims[0])]
    bars = {}
    for k in range(n - 1):
        a = mats[k]
        rows, out = dims[k + 1], []
        pivots = {}
        for vec, birth in sorted(basis, key=lambda t: t[1]):
            img = [sum(a[r][c] * vec[c] for c in range(dims[k])) % P for r in range(rows)]
            red = _reduce(img, pivots)
            piv = next((i for i, x in enumerate(red) if x), None)
            if piv is None:
                bars[(birth, k)] = bars.get((birth, k), 0) + 1
                continue
            pivots[piv] = (red, birth)
            out.append((red, birth))
        for i in range(rows):
            if len(out) == rows:
                break
            e = [1 if j == i else 0 for j in range(rows)]
            red = _reduce(e, pivots)
            piv = next((j for j, x in enumerate(red) if x), None)
            if piv is not None:
                pivots[piv] = (red, k + 1)
                out.append((red, k + 1))
        basis = out
    for _, birth in basis:
        bars[(birth, n - 1)] = bars.get((birth, n - 1), 0) + 1
    return bars


def tits_oracle(vertices, edges):
    """Sign of the Tits form, read off sympy's definiteness tests on the symmetric Gram matrix."""
    import sympy

    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    g = sympy.zeros(n, n)
    for i in range(n):
        g[i, i] = 2
    for s, t in edges:
        g[idx[s], idx[t]] -= 1
        g[idx[t], idx[s]] -= 1
    if g.is_positive_definite:
        return "definite"
    if g.is_positive_semidefinite:
        return "semidefinite"
    return "indefinite"
