"""Sigma-invariants of planes relative to a fixed plane W, collision matrices,
and the binary code built from the missing points."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import networkx as nx

from . import gf2
from .field import FieldContext
from .geometry import (
    GeometryError,
    Subspace,
    frobenius,
    intersect,
    lines,
    quotient_reps,
    span,
    trace_orthogonal,
)
from .linpoly import delta, subspace_polynomial


class InvariantViolation(AssertionError):
    """A proven structural property failed; indicates a bug."""


def _line_data(ctx: FieldContext, z: Subspace):
    """(a0, a1) with s_Z = X^4 + a1 X^2 + a0 X."""
    a0, a1, _ = subspace_polynomial(z).coeffs
    return a0, a1


def _s_line(ctx: FieldContext, a0: int, a1: int, x: int) -> int:
    return ctx.frobenius(x, 2) ^ ctx.mul(a1, ctx.sqr(x)) ^ ctx.mul(a0, x)


def sigma_invariant(w: Subspace, e: Subspace, line: Subspace | None = None) -> int:
    """delta(E)/delta(Z)^3 with Z = E cap W, evaluated as s_Z(x)/delta(Z)^2.

    For E = W the line Z must be passed explicitly and the result is the
    missing value of that line.
    """
    ctx = w.ctx
    if e == w:
        if line is None or line.dim != 2 or not w.contains(line):
            raise GeometryError("E = W needs an explicit line of W")
        z = line
    else:
        z = intersect(e, w)
        if z.dim != 2 or e.dim != 3:
            raise GeometryError("E must be a plane meeting W in a line")
    a0, a1 = _line_data(ctx, z)
    x = next(r for r in e.rows if r not in z)
    return ctx.div(_s_line(ctx, a0, a1, x), ctx.sqr(a0))


@dataclass(frozen=True)
class MissingPoints:
    points: tuple[int, ...]   # indexed like lines(W)
    lines: tuple[Subspace, ...]
    mu: int
    image_size: int

    def multiset(self) -> Counter:
        return Counter(self.points)


def collision_space(w: Subspace) -> Subspace:
    """(W^2)^perp, the set of sigma-values taken more than once."""
    return trace_orthogonal(frobenius(w))


def missing_points(w: Subspace) -> MissingPoints:
    if w.dim != 3:
        raise GeometryError("W must be a plane")
    ctx = w.ctx
    dw = delta(w)
    ls = tuple(lines(w))
    pts = tuple(ctx.div(dw, ctx.pow(delta(z), 3)) for z in ls)
    cs = collision_space(w)
    mu = sum(1 for p in pts if p in cs)
    return MissingPoints(pts, ls, mu, ctx.q1 - (7 - mu))


def hyperplane_HZ(w: Subspace, z: Subspace) -> Subspace:
    """{x : Tr(m x^2) = 0} for the missing point m of the line Z."""
    if z.dim != 2 or not w.contains(z):
        raise GeometryError("Z must be a line of W")
    ctx = w.ctx
    m = ctx.div(delta(w), ctx.pow(delta(z), 3))
    images = [ctx.trace(ctx.mul(m, ctx.sqr(1 << j))) for j in range(ctx.n)]
    return Subspace(ctx, gf2.kernel(images))


@dataclass(frozen=True)
class CollisionMatrix:
    w: Subspace
    rows: tuple[int, ...]       # least coset representative u of each solid <W, u>
    cols: tuple[int, ...]       # nonzero elements of the collision space, ascending
    entries: tuple[tuple[int, ...], ...]

    @property
    def ctx(self) -> FieldContext:
        return self.w.ctx

    @property
    def order(self) -> int:
        return len(self.rows)

    def row_sums(self) -> list[int]:
        return [sum(r) for r in self.entries]

    def col_sums(self) -> list[int]:
        return [sum(c) for c in zip(*self.entries)] if self.entries else []

    def to_json(self) -> dict:
        return {
            "n": self.ctx.n,
            "W": self.w.to_json(),
            "rows": [format(u, "x") for u in self.rows],
            "cols": [format(y, "x") for y in self.cols],
            "entries": [list(r) for r in self.entries],
        }

    def render(self) -> str:
        return "\n".join(" ".join(str(c) for c in r) for r in self.entries)


class _PlaneSigma:
    """Precomputed data for fast sigma evaluation on the planes meeting W in a line."""

    def __init__(self, w: Subspace):
        ctx = w.ctx
        self.ctx = ctx
        self.w = w
        self.lines = lines(w)
        self.data = []
        dw = delta(w)
        for z in self.lines:
            a0, a1 = _line_data(ctx, z)
            inv2 = ctx.inv(ctx.sqr(a0))
            c = next(r for r in w.rows if r not in z)
            m = ctx.div(dw, ctx.pow(a0, 3))
            self.data.append((z, a0, a1, inv2, c, m))
        self.cspace = collision_space(w)
        self.funcs = [ctx.trace_functional(ctx.sqr(x)) for x in w.rows]

    def in_collision_space(self, y: int) -> bool:
        return not any((y & t).bit_count() & 1 for t in self.funcs)

    def solid_values(self, u: int):
        """Yield (line index, x, sigma) for the 14 planes <Z, x> != W of <W, u>."""
        ctx = self.ctx
        for idx, (z, a0, a1, inv2, c, m) in enumerate(self.data):
            y = ctx.mul(_s_line(ctx, a0, a1, u), inv2)
            yield idx, u, y
            yield idx, u ^ c, y ^ m


def collision_matrix(w: Subspace) -> CollisionMatrix:
    if w.dim != 3:
        raise GeometryError("W must be a plane")
    if w.n < 4:
        raise GeometryError("collision matrices need n >= 4")
    ps = _PlaneSigma(w)
    cols = tuple(ps.cspace.points())
    index = {y: j for j, y in enumerate(cols)}
    reps = tuple(quotient_reps(w))
    entries = []
    for u in reps:
        row = [0] * len(cols)
        for _, _, y in ps.solid_values(u):
            j = index.get(y)
            if j is not None:
                row[j] += 1
        entries.append(tuple(row))
    return CollisionMatrix(w, reps, cols, tuple(entries))


@dataclass(frozen=True)
class ColumnReport:
    types: tuple[str, ...]        # "1^7", "2^3" or "4^1" per column
    supports: tuple[Subspace, ...]  # support of each column as a subspace of F/W (span with W)
    row_parity: int


def column_types(cm: CollisionMatrix) -> ColumnReport:
    w = cm.w
    types = []
    supports = []
    for j in range(len(cm.cols)):
        col = [cm.entries[i][j] for i in range(cm.order)]
        nz = [i for i, c in enumerate(col) if c]
        vals = {col[i] for i in nz}
        if len(vals) != 1:
            raise InvariantViolation(f"column {j} mixes entry values {sorted(vals)}")
        v = vals.pop()
        t = {1: (7, "1^7"), 2: (3, "2^3"), 4: (1, "4^1")}.get(v)
        if t is None or len(nz) != t[0]:
            raise InvariantViolation(f"column {j} has {len(nz)} entries equal to {v}")
        types.append(t[1])
        sup = span(w.ctx, list(w.rows) + [cm.rows[i] for i in nz])
        if sup.dim != 3 + {7: 3, 3: 2, 1: 1}[len(nz)]:
            raise InvariantViolation(f"support of column {j} is not a subspace of F/W")
        supports.append(sup)
    parities = {s % 2 for s in cm.row_sums()}
    if len(parities) > 1:
        raise InvariantViolation("row sums differ in parity")
    return ColumnReport(tuple(types), tuple(supports), parities.pop() if parities else 0)


@dataclass(frozen=True)
class AssociatedCode:
    n: int
    mu: int
    k: int
    hull: tuple[int, ...]       # basis of the span M of the missing points in the collision space
    columns: tuple[int, ...]    # coordinates of each such missing point in the hull basis (k-bit masks)
    weight_distribution: tuple[int, ...]   # A_0..A_mu

    @property
    def empty(self) -> bool:
        return self.mu == 0


def associated_code(w: Subspace) -> AssociatedCode:
    mp = missing_points(w)
    cs = collision_space(w)
    inside = sorted(p for p in mp.points if p in cs)
    mu = len(inside)
    hull: list[int] = []
    for p in inside:
        if gf2.rank(hull + [p]) > len(hull):
            hull.append(p)
    k = len(hull)
    columns = []
    for p in inside:
        c = gf2.solve(hull, p)
        assert c is not None
        columns.append(c)
    dist = [0] * (mu + 1)
    for msg in range(1 << k):
        wt = sum((msg & c).bit_count() & 1 for c in columns)
        dist[wt] += 1
    return AssociatedCode(w.n, mu, k, tuple(hull), tuple(columns), tuple(dist))


def row_sum_spectrum(source, n: int | None = None) -> dict[int, int]:
    """Row sum -> number of rows, from a matrix or predicted from the code."""
    if isinstance(source, CollisionMatrix):
        return dict(sorted(Counter(source.row_sums()).items()))
    code: AssociatedCode = source
    n = code.n if n is None else n
    if code.empty:
        return {7: (1 << (n - 3)) - 1}
    scale = 1 << (n - 3 - code.k)
    out: Counter = Counter()
    for i, a in enumerate(code.weight_distribution):
        if i and a:
            out[code.mu + 7 - 2 * i] += a * scale
    if scale > 1:
        out[7 + code.mu] += scale - 1
    return dict(sorted(out.items()))


def row_sums_from_hyperplanes(cm: CollisionMatrix) -> list[int]:
    """7 - mu + 2 nu per row, nu counting lines Z whose hyperplane H_Z holds the solid."""
    w = cm.w
    mu = missing_points(w).mu
    hs = [hyperplane_HZ(w, z) for z in lines(w)]
    out = []
    for u in cm.rows:
        nu = sum(1 for h in hs if u in h and h.contains(w))
        out.append(7 - mu + 2 * nu)
    return out


# matrix comparison up to row and column permutations

def matrix_signature(entries) -> tuple:
    """Permutation-invariant fingerprint; equal for equivalent matrices."""
    rows = tuple(sorted(tuple(sorted(r)) for r in entries))
    cols = tuple(sorted(tuple(sorted(c)) for c in zip(*entries)))
    return rows, cols


def _bipartite(entries) -> nx.Graph:
    g = nx.Graph()
    nrows = len(entries)
    ncols = len(entries[0]) if entries else 0
    g.add_nodes_from((("r", i) for i in range(nrows)), side=0)
    g.add_nodes_from((("c", j) for j in range(ncols)), side=1)
    for i, r in enumerate(entries):
        for j, v in enumerate(r):
            if v:
                g.add_edge(("r", i), ("c", j), w=v)
    return g


def permutation_equivalent(a, b) -> bool:
    """Exact test whether b is a row/column permutation of a."""
    a = [tuple(r) for r in a]
    b = [tuple(r) for r in b]
    if len(a) != len(b) or matrix_signature(a) != matrix_signature(b):
        return False
    return nx.is_isomorphic(
        _bipartite(a),
        _bipartite(b),
        node_match=lambda x, y: x["side"] == y["side"],
        edge_match=lambda x, y: x["w"] == y["w"],
    )
