"""Representation-type verdicts for thread quivers and their sampled algebras."""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import NotBiserial
from .exactla import RationalField
from .ideal import IdealSpec, QuadI, QuadII, Rect, mem
from .order import SRC, TGT, Bound, Inner, Vertex
from .partition import BoundQuiver, ValidPartition, sampled_bound_quiver
from .pathcat import MorphismCombination, has_directed_cycle, make_pathlike

_QF = RationalField()

TILDE = {"A": "Ã", "D": "D̃", "E": "Ẽ"}


# -- graph shapes --------------------------------------------------------------------------


@dataclass(frozen=True)
class Shape:
    """Type of one connected graph: family letter, rank and whether it is extended."""

    letter: str
    n: int
    extended: bool = False

    def __str__(self):
        return f"{TILDE[self.letter] if self.extended else self.letter}{self.n}"


@dataclass
class GraphType:
    kind: str  # "Dynkin", "Euclidean" or "Neither"
    components: list = dc_field(default_factory=list)

    def __str__(self):
        parts = ", ".join(str(c) if c else "wild" for c in self.components)
        return f"{self.kind} ({parts})" if parts else self.kind

    def family(self):
        """Letters of the worst components, e.g. "Ã" or "D"."""
        worst = [c for c in self.components if c is None or c.extended] or self.components
        names = sorted({(TILDE[c.letter] if c.extended else c.letter) if c else "wild" for c in worst})
        return "/".join(names)


def _graph(g):
    """Vertices and undirected edges of a BoundQuiver, ThreadQuiver or (vertices, edges) pair."""
    if isinstance(g, tuple):
        return list(g[0]), list(g[1])
    if isinstance(g, BoundQuiver):
        return list(g.vertices), [st for st in g.arrows.values()]
    return list(g.vertices), [(a.source, a.target) for a in g.arrows]


def _components(vertices, edges):
    adj = {v: [] for v in vertices}
    for s, t in edges:
        adj[s].append(t)
        if s != t:
            adj[t].append(s)
    seen, comps = set(), []
    for v in vertices:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        cs = set(comp)
        comps.append((comp, [(s, t) for s, t in edges if s in cs]))
    return comps


def _arms(center, adj):
    out = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev, cur = cur, nxt[0]
            length += 1
        out.append(length)
    return sorted(out)


def component_shape(vertices, edges):
    """Shape of a connected multigraph, or None when it is neither Dynkin nor Euclidean."""
    nv, ne = len(vertices), len(edges)
    deg = {v: 0 for v in vertices}
    adj = {v: [] for v in vertices}
    for s, t in edges:
        deg[s] += 1
        deg[t] += 1
        adj[s].append(t)
        adj[t].append(s)
    if ne == nv:
        if all(d == 2 for d in deg.values()):
            return Shape("A", nv - 1, True)
        return None
    if ne != nv - 1:
        return None
    branch = [v for v in vertices if deg[v] >= 3]
    if not branch:
        return Shape("A", nv)
    if any(deg[v] > 4 for v in branch):
        return None
    if len(branch) == 1:
        c = branch[0]
        arms = _arms(c, adj)
        if arms is None:
            return None
        if deg[c] == 4:
            return Shape("D", 4, True) if arms == [1, 1, 1, 1] else None
        table = {(1, 2, 2): Shape("E", 6), (1, 2, 3): Shape("E", 7), (1, 2, 4): Shape("E", 8),
                 (2, 2, 2): Shape("E", 6, True), (1, 3, 3): Shape("E", 7, True), (1, 2, 5): Shape("E", 8, True)}
        if arms[0] == 1 and arms[1] == 1:
            return Shape("D", nv)
        return table.get(tuple(arms))
    if len(branch) == 2 and all(deg[v] == 3 for v in branch):
        for v in branch:
            leaves = [w for w in adj[v] if deg[w] == 1]
            if len(leaves) < 2:
                return None
        return Shape("D", nv - 1, True)
    return None


def graph_type(g):
    """Dynkin, Euclidean or Neither, classifying connected components separately."""
    vertices, edges = _graph(g)
    shapes = [component_shape(vs, es) for vs, es in _components(vertices, edges)]
    if any(s is None for s in shapes):
        kind = "Neither"
    elif any(s.extended for s in shapes):
        kind = "Euclidean"
    else:
        kind = "Dynkin"
    return GraphType(kind, shapes)


def tits_form_class(g):
    """Definiteness of the Tits form 2q (exact symmetric elimination).

    Returns "definite", "semidefinite" or "indefinite"; Dynkin graphs are
    exactly the definite ones, Euclidean ones the semidefinite ones.
    """
    vertices, edges = _graph(g)
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = Fraction(2)
    for s, t in edges:
        i, j = idx[s], idx[t]
        if i == j:
            a[i][i] -= 2
        else:
            a[i][j] -= 1
            a[j][i] -= 1
    definite = True
    for k in range(n):
        p = a[k][k]
        if p < 0:
            return "indefinite"
        if p == 0:
            if any(a[k][j] != 0 for j in range(k + 1, n)):
                return "indefinite"
            definite = False
            continue
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return "definite" if definite else "semidefinite"


# -- special biserial -------------------------------------------------------------------------


@dataclass
class SBReport:
    special_biserial: bool
    gentle: bool
    string: bool
    witnesses: list = dc_field(default_factory=list)


def check_biserial(quiver):
    for v in quiver.vertices:
        if len(quiver.out_arrows(v)) > 2 or len(quiver.in_arrows(v)) > 2:
            raise NotBiserial(f"vertex {v} has more than two arrows on one side", witness=v)


def _near_end(quiver, arrow, ideal):
    """A point of the last ideal cell of a thread (or its source vertex if unthreaded)."""
    a = quiver.arrow(arrow)
    m = a.model
    if not a.threaded:
        return Vertex(a.source)
    if m.kind == "finite":
        return Inner(arrow, m.n)
    bps = sorted(ideal.breakpoints(quiver, arrow))
    lo = bps[-1] if bps else m.lo
    if m.hi is None:
        return Inner(arrow, (lo if lo is not None else 0) + 1)
    if lo is None:
        return Inner(arrow, m.hi - 1)
    return Inner(arrow, (lo + m.hi) / 2)


def _near_start(quiver, arrow, ideal):
    a = quiver.arrow(arrow)
    m = a.model
    if not a.threaded:
        return Vertex(a.target)
    if m.kind == "finite":
        return Inner(arrow, 1)
    bps = sorted(ideal.breakpoints(quiver, arrow))
    hi = bps[0] if bps else m.hi
    if m.lo is None:
        return Inner(arrow, (hi if hi is not None else 0) - 1)
    if hi is None:
        return Inner(arrow, m.lo + 1)
    return Inner(arrow, (m.lo + hi) / 2)


def family_in_ideal(quiver, ideal, incoming, outgoing):
    """Whether the ideal holds the whole quadratic family through t(incoming).

    The ideal is closed under composition, so the family is contained as
    soon as its shortest members (ends in the cells next to the vertex) are.
    """
    if QuadI(incoming, outgoing) in ideal.families:
        return True
    y = _near_end(quiver, incoming, ideal)
    z = _near_start(quiver, outgoing, ideal)
    path = ((incoming,) if isinstance(y, Vertex) else ()) + ((outgoing,) if isinstance(z, Vertex) else ())
    m = make_pathlike(quiver, y, z, path)
    return mem(MorphismCombination.basis(_QF, m), ideal, quiver)


def _is_quadratic(fam):
    if isinstance(fam, (QuadI, QuadII)):
        return True
    # a rectangle through one vertex over both whole threads is a quadratic family
    return (isinstance(fam, Rect) and not fam.path
            and fam.xs.lo == Bound(SRC, False) and fam.xs.hi == Bound(TGT, False)
            and fam.ys.lo == Bound(SRC, False) and fam.ys.hi == Bound(TGT, False))


def detect_sb(quiver, ideal=None):
    """Evaluate the special biserial conditions at every vertex."""
    ideal = ideal or IdealSpec()
    check_biserial(quiver)
    sb, gentle = True, True
    witnesses = []
    for v in quiver.vertices:
        ins, outs = quiver.in_arrows(v), quiver.out_arrows(v)
        for a in ins:
            if len(outs) == 2:
                b, c = outs
                hits = [family_in_ideal(quiver, ideal, a, b), family_in_ideal(quiver, ideal, a, c)]
                if not any(hits):
                    sb = False
                    witnesses.append((a, b, c))
                if sum(hits) != 1:
                    gentle = False
        for c in outs:
            if len(ins) == 2:
                a, b = ins
                hits = [family_in_ideal(quiver, ideal, a, c), family_in_ideal(quiver, ideal, b, c)]
                if not any(hits):
                    sb = False
                    witnesses.append((a, b, c))
                if sum(hits) != 1:
                    gentle = False
    quadratic_only = all(_is_quadratic(f) for f in ideal.families) and not ideal.relations
    string = sb and not ideal.linear_relations
    return SBReport(sb, sb and gentle and quadratic_only, string, witnesses)


def is_string_algebra(bq):
    """Monomial special biserial bound quiver."""
    if bq.linear_relations:
        return False
    for v in bq.vertices:
        if len(bq.out_arrows(v)) > 2 or len(bq.in_arrows(v)) > 2:
            return False
    for a in bq.arrows:
        t = bq.target(a)
        if sum(1 for b in bq.out_arrows(t) if not bq.path_is_zero((a, b))) > 1:
            return False
        s = bq.source(a)
        if sum(1 for b in bq.in_arrows(s) if not bq.path_is_zero((b, a))) > 1:
            return False
    return True


# -- bands ----------------------------------------------------------------------------------


def _letter_ends(bq, letter):
    a, sign = letter
    s, t = bq.arrows[a]
    return (s, t) if sign > 0 else (t, s)


def is_string_word(bq, word):
    """Reduced walk avoiding the zero relations in both directions."""
    for (a, sa), (b, sb) in zip(word, word[1:]):
        if _letter_ends(bq, (a, sa))[1] != _letter_ends(bq, (b, sb))[0]:
            return False
        if a == b and sa != sb:
            return False
    run, sign = [], 0
    for a, s in list(word) + [(None, 0)]:
        if s == sign and a is not None:
            run.append(a)
            continue
        if run:
            path = tuple(run) if sign > 0 else tuple(reversed(run))
            if bq.path_is_zero(path):
                return False
        run, sign = ([a], s) if a is not None else ([], 0)
    return True


def bands_exist(bq, max_len=None):
    """Search closed walks whose powers are all strings (bounded length)."""
    if not bq.arrows:
        return False
    max_len = max_len or 2 * len(bq.arrows)
    rel_len = max((len(r) for r in bq.zero_relations), default=1)
    letters = {}
    for a, (s, t) in bq.arrows.items():
        letters.setdefault(s, []).append((a, 1))
        letters.setdefault(t, []).append((a, -1))
    for start in bq.vertices:
        stack = [(start, ())]
        while stack:
            v, word = stack.pop()
            for letter in letters.get(v, []):
                w = word + (letter,)
                if not is_string_word(bq, w):
                    continue
                end = _letter_ends(bq, letter)[1]
                if end == start:
                    reps = rel_len // len(w) + 3
                    if is_string_word(bq, w * reps):
                        return True
                if len(w) < max_len:
                    stack.append((end, w))
    return False


# -- virtual type ---------------------------------------------------------------------------


@dataclass
class Verdict:
    kind: str  # VirtuallyFinite, VirtuallyTame, NotVirtuallyTame, Inconclusive
    detail: str = ""
    depth: int = None
    witness: object = None
    history: list = dc_field(default_factory=list)

    def __str__(self):
        return f"{self.kind} ({self.detail})" if self.detail else self.kind


def _sampled(quiver, ideal, depth):
    part = ValidPartition.uniform(quiver, depth)
    extra = {a.name: {(b, s) for b in ideal.breakpoints(quiver, a.name) for s in "+-"}
             for a in quiver.threaded_arrows() if a.model.is_dense}
    if any(extra.values()):
        part = part.with_markers(extra)
    return sampled_bound_quiver(quiver, ideal, part)


def virtual_type(quiver, ideal=None, depth_max=6):
    """Virtual representation type from the sampled algebras at depths 1..depth_max."""
    ideal = ideal or IdealSpec()
    if ideal.is_zero():
        return _hereditary_type(quiver, depth_max)
    try:
        sb = detect_sb(quiver, ideal)
    except NotBiserial:
        return Verdict("Inconclusive", "nonzero ideal on a non-biserial quiver")
    if not sb.special_biserial:
        return Verdict("Inconclusive", "nonzero ideal that is not special biserial", witness=sb.witnesses)
    history = []
    for d in range(1, depth_max + 1):
        sbq = _sampled(quiver, ideal, d)
        ok = is_string_algebra(sbq.bound) and not bands_exist(sbq.bound)
        history.append((d, "string, no bands" if ok else "bands or not string"))
        if not ok:
            return Verdict("VirtuallyTame", "special biserial", d, sbq, history)
    return Verdict("VirtuallyFinite", "special biserial, string algebras without bands", depth_max, None, history)


def _hereditary_type(quiver, depth_max):
    if has_directed_cycle(quiver):
        return Verdict("Inconclusive", "oriented cycle without relations")
    history = []
    for d in range(1, depth_max + 1):
        sbq = _sampled(quiver, IdealSpec(), d)
        gt = graph_type(sbq.bound)
        history.append((d, gt))
        if gt.kind == "Neither":
            return Verdict("NotVirtuallyTame", f"wild sample at depth {d}", d, sbq, history)
    last, prev = history[-1][1], history[-2][1] if len(history) > 1 else history[-1][1]
    if last.kind != prev.kind:
        return Verdict("Inconclusive", "not stable at the last two depths", depth_max, None, history)
    if any(g.kind == "Euclidean" for _, g in history):
        return Verdict("VirtuallyTame", f"Euclidean {last.family()} family", depth_max, None, history)
    if not quiver.threaded_arrows():
        return Verdict("VirtuallyFinite", f"Dynkin {', '.join(map(str, last.components))}", depth_max, None, history)
    return Verdict("VirtuallyFinite", f"Dynkin {last.family()} family", depth_max, None, history)
