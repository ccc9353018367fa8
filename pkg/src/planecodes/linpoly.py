"""Linearized polynomials sum a_i X^(2^i) over F_{2^n}.

Covers subspace polynomials, Dickson invariants, Moore determinants, and the
opposite and adjoint subspaces derived from them.
"""

from __future__ import annotations

from . import gf2
from .field import FieldContext
from .geometry import GeometryError, Subspace, lines, span


class LinearizedPoly:
    """Coefficient a_i multiplies X^(2^i).  Trailing zeros are trimmed."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    @classmethod
    def x(cls, ctx: FieldContext) -> "LinearizedPoly":
        return cls(ctx, [1])

    @property
    def degree(self) -> int:
        """Symbolic degree (q-degree); -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearizedPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for i in reversed(range(len(self.coeffs))):
            a = self.coeffs[i]
            if a:
                mon = f"X^{1 << i}" if i else "X"
                terms.append(mon if a == 1 else f"{self.ctx.fmt(a)}*{mon}")
        return " + ".join(terms) or "0"

    def __add__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        m = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (m - len(self.coeffs))
        b = other.coeffs + (0,) * (m - len(other.coeffs))
        return LinearizedPoly(self.ctx, [x ^ y for x, y in zip(a, b)])

    def __call__(self, x: int) -> int:
        return self.evaluate(x)

    def evaluate(self, x: int) -> int:
        ctx = self.ctx
        if x == 0:
            return 0
        lx = ctx.log[x]
        q1 = ctx.q1
        exp, log = ctx.exp, ctx.log
        acc = 0
        e = lx
        for a in self.coeffs:
            if a:
                acc ^= exp[(log[a] + e) % q1]
            e = (e << 1) % q1
        return acc

    def compose(self, other: "LinearizedPoly", reduce: bool = False) -> "LinearizedPoly":
        """self o other, i.e. self(other(X)).  With reduce=True the result is
        taken modulo X^(2^n) + X."""
        ctx = self.ctx
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] ^= ctx.mul(a, ctx.frobenius(b, i))
        if reduce:
            folded = [0] * ctx.n
            for i, c in enumerate(out):
                folded[i % ctx.n] ^= c
            out = folded
        return LinearizedPoly(ctx, out)

    def to_json(self) -> list[str]:
        return [format(a, "x") for a in self.coeffs]


def symbolic_compose(p: LinearizedPoly, q: LinearizedPoly, reduce: bool = False) -> LinearizedPoly:
    return p.compose(q, reduce=reduce)


def field_polynomial(ctx: FieldContext) -> LinearizedPoly:
    """X^(2^n) + X."""
    return LinearizedPoly(ctx, [1] + [0] * (ctx.n - 1) + [1])


def subspace_polynomial(u: Subspace) -> LinearizedPoly:
    """Monic s_U with root set U, via s = (X^2 + s(b) X) o s over a basis."""
    ctx = u.ctx
    s = [1]
    for b in u.rows:
        sb = LinearizedPoly(ctx, s).evaluate(b)
        # (X^2 + c X) o s = s^2 shifted up one step, plus c * s
        sq = [0] + [ctx.sqr(a) for a in s]
        for i, a in enumerate(s):
            sq[i] ^= ctx.mul(sb, a)
        s = sq
    return LinearizedPoly(ctx, s)


def moore_determinant(ctx: FieldContext, xs) -> int:
    """det(x_j^(2^i)) by Gaussian elimination over F_{2^n}."""
    xs = list(xs)
    k = len(xs)
    if k == 0:
        return 1
    m = [[ctx.frobenius(x, i) for x in xs] for i in range(k)]
    det = 1
    for col in range(k):
        piv = next((r for r in range(col, k) if m[r][col]), None)
        if piv is None:
            return 0
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        det = ctx.mul(det, p)
        pinv = ctx.inv(p)
        for r in range(col + 1, k):
            f = m[r][col]
            if f:
                f = ctx.mul(f, pinv)
                row, prow = m[r], m[col]
                for c in range(col, k):
                    row[c] ^= ctx.mul(f, prow[c])
    return det


def moore_product(ctx: FieldContext, xs) -> int:
    """Product of all nonzero F_2-combinations of the arguments (zero if dependent)."""
    return ctx.prod(gf2.span_points(xs)[1:])


def delta(u: Subspace) -> int:
    """delta(U): product of the nonzero elements of U (1 for the zero space)."""
    return u.ctx.prod(gf2.span_points(u.rows)[1:])


def delta_pair(ctx: FieldContext, x: int, y: int) -> int:
    """delta(x, y) = xy(x + y) = x y^2 + x^2 y."""
    return ctx.mul(ctx.mul(x, y), x ^ y)


def dickson_invariants(u: Subspace) -> list[int]:
    """(delta_1, ..., delta_k) with delta_i the coefficient of X^(2^(k-i)) in s_U."""
    s = subspace_polynomial(u).coeffs
    k = u.dim
    return [s[k - i] for i in range(1, k + 1)]


def opposite_subspace(u: Subspace) -> Subspace:
    """Image of x -> s_U(x)."""
    s = subspace_polynomial(u)
    return span(u.ctx, (s.evaluate(1 << i) for i in range(u.n)))


def _adjoint_quotients(u: Subspace) -> Subspace:
    ctx = u.ctx
    d = moore_product(ctx, u.rows)
    gens = []
    for j in range(u.dim):
        rest = u.rows[:j] + u.rows[j + 1:]
        gens.append(ctx.div(moore_product(ctx, rest), d))
    return span(ctx, gens)


def _adjoint_reciprocal(u: Subspace) -> Subspace:
    """Square roots of the roots of the reciprocal sum (a_i X)^(2^(k-i))."""
    ctx = u.ctx
    a = subspace_polynomial(u).coeffs
    k = u.dim
    recip = [0] * (k + 1)
    for i, c in enumerate(a):
        recip[k - i] ^= ctx.frobenius(c, k - i)
    poly = LinearizedPoly(ctx, recip)
    roots = gf2.kernel([poly.evaluate(1 << j) for j in range(ctx.n)])
    return span(ctx, (ctx.frobenius(y, ctx.n - 1) for y in roots))


def adjoint_subspace(u: Subspace, method: str = "auto") -> Subspace:
    if u.dim == 0:
        raise GeometryError("adjoint of the zero subspace")
    if method == "auto":
        method = "quotients" if u.dim <= 3 else "reciprocal"
    if method == "quotients":
        return _adjoint_quotients(u)
    if method == "reciprocal":
        return _adjoint_reciprocal(u)
    raise GeometryError(f"unknown method {method!r}")


def delta_line_map(e: Subspace) -> Subspace:
    """The plane spanned by delta(L) over the 7 lines L of a plane E."""
    if e.dim != 3:
        raise GeometryError("delta_line_map needs a plane")
    vals = [delta(z) for z in lines(e)]
    if len(set(vals)) != 7:
        raise AssertionError("line values of a plane must be distinct")
    return span(e.ctx, vals)


def fixed_dickson_buckets(ctx: FieldContext, k: int) -> dict[int, list[Subspace]]:
    """All k-subspaces grouped by delta(U)."""
    from .geometry import enumerate_subspaces

    out: dict[int, list[Subspace]] = {}
    for u in enumerate_subspaces(ctx, k):
        out.setdefault(delta(u), []).append(u)
    return out
