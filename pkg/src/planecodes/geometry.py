"""Subspaces of F_{2^n} over F_2, kept in canonical reduced row echelon form."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

from . import gf2
from .field import FieldContext, FieldError


class GeometryError(ValueError):
    pass


class Subspace:
    """An F_2-subspace of F_{2^n}.

    ``rows`` is the RREF basis with descending pivots; two subspaces are equal
    iff their rows are identical.  Ordering compares the concatenated RREF
    bit pattern, i.e. the rows tuple.
    """

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: FieldContext, rows: tuple[int, ...]):
        self.ctx = ctx
        self.rows = rows

    @classmethod
    def span(cls, ctx: FieldContext, gens: Iterable[int]) -> "Subspace":
        return cls(ctx, gf2.rref(gens))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.ctx.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ctx.n == other.ctx.n
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.ctx.n, self.rows))

    def __lt__(self, other: "Subspace") -> bool:
        return (self.dim, self.rows) < (other.dim, other.rows)

    def __repr__(self) -> str:
        gens = ", ".join(self.ctx.fmt(r) for r in self.rows)
        return f"<{gens}>"

    def __contains__(self, x: int) -> bool:
        return gf2.reduce(x, self.rows) == 0

    def __len__(self) -> int:
        return 1 << self.dim

    def elements(self) -> list[int]:
        """All 2^k elements, zero included."""
        return gf2.span_points(self.rows)

    def points(self) -> list[int]:
        """The nonzero elements, sorted."""
        return sorted(gf2.span_points(self.rows)[1:])

    def contains(self, other: "Subspace") -> bool:
        _check_same(self, other)
        return all(r in self for r in other.rows)

    def to_json(self) -> dict:
        return {"n": self.n, "dim": self.dim, "rows": [format(r, "x") for r in self.rows]}

    @classmethod
    def from_json(cls, ctx: FieldContext, obj: dict) -> "Subspace":
        if obj["n"] != ctx.n:
            raise GeometryError("field degree mismatch")
        return cls.span(ctx, (int(r, 16) for r in obj["rows"]))


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.ctx.n != b.ctx.n:
        raise GeometryError("subspaces live in different fields")


def span(ctx: FieldContext, gens: Iterable[int]) -> Subspace:
    return Subspace.span(ctx, gens)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    n = a.n
    # Zassenhaus: rows (x|x) for x in A and (y|0) for y in B; rows with an
    # empty left half carry the intersection.
    stacked = [(x << n) | x for x in a.rows] + [y << n for y in b.rows]
    rows = gf2.rref(stacked)
    return Subspace.span(a.ctx, (r for r in rows if r >> n == 0))


def join(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return Subspace.span(a.ctx, a.rows + b.rows)


def lattice(a: Subspace, b: Subspace, op: str):
    if op == "intersect":
        return intersect(a, b)
    if op == "sum":
        return join(a, b)
    if op == "contains":
        return a.contains(b)
    raise GeometryError(f"unknown lattice op {op!r}")


def gaussian_binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def _rref_subspaces(positions: list[int], k: int) -> Iterator[tuple[int, ...]]:
    """All k-dim RREF bases inside the coordinate positions given (ascending),
    in ascending order of the rows tuple."""
    if k == 0:
        yield ()
        return
    m = len(positions)
    for top in range(k - 1, m):
        chunk = []
        for rest in combinations(range(top), k - 1):
            piv = (top,) + tuple(reversed(rest))
            pivset = set(piv)
            frees = [[j for j in range(p) if j not in pivset] for p in piv]
            total = sum(len(f) for f in frees)
            for mask in range(1 << total):
                rows = []
                shift = 0
                for p, f in zip(piv, frees):
                    row = 1 << positions[p]
                    for i, j in enumerate(f):
                        if mask >> (shift + i) & 1:
                            row |= 1 << positions[j]
                    shift += len(f)
                    rows.append(row)
                chunk.append(tuple(rows))
        chunk.sort()
        yield from chunk


def enumerate_subspaces(ctx: FieldContext, k: int) -> Iterator[Subspace]:
    """Every k-subspace exactly once, ascending in canonical order."""
    if not 0 <= k <= ctx.n:
        raise GeometryError(f"dimension {k} out of range")
    for rows in _rref_subspaces(list(range(ctx.n)), k):
        yield Subspace(ctx, rows)


def subspaces_of(u: Subspace, k: int) -> list[Subspace]:
    """All k-subspaces contained in u, sorted canonically."""
    if not 0 <= k <= u.dim:
        raise GeometryError(f"dimension {k} out of range")
    basis = u.rows
    out = []
    for rows in _rref_subspaces(list(range(u.dim)), k):
        gens = []
        for r in rows:
            v = 0
            for i, b in enumerate(reversed(basis)):
                if r >> i & 1:
                    v ^= b
            gens.append(v)
        out.append(Subspace.span(u.ctx, gens))
    out.sort()
    return out


def lines(u: Subspace) -> list[Subspace]:
    return subspaces_of(u, 2)


def _free_positions(u: Subspace) -> list[int]:
    piv = gf2.pivot_mask(u.rows)
    return [i for i in range(u.n) if not piv >> i & 1]


def superspaces(u: Subspace, k: int) -> list[Subspace]:
    """All k-subspaces containing u, sorted canonically."""
    if not u.dim <= k <= u.n:
        raise GeometryError(f"dimension {k} out of range")
    free = _free_positions(u)
    out = [
        Subspace.span(u.ctx, u.rows + rows)
        for rows in _rref_subspaces(free, k - u.dim)
    ]
    out.sort()
    return out


def quotient_reps(u: Subspace) -> list[int]:
    """Least element of each nonzero coset of F/u, ascending."""
    free = _free_positions(u)
    return [gf2.deposit(x, free) for x in range(1, 1 << len(free))]


def enumerate_space(ctx: FieldContext, mode: str, k: int | None = None, u: Subspace | None = None):
    if mode == "subspaces":
        return enumerate_subspaces(ctx, k)
    if mode == "superspaces":
        return iter(superspaces(u, k))
    if mode == "quotient_reps":
        return iter(quotient_reps(u))
    raise GeometryError(f"unknown enumeration mode {mode!r}")


def trace_orthogonal(u: Subspace) -> Subspace:
    """{y : Tr(xy) = 0 for all x in u}."""
    ctx = u.ctx
    funcs = [ctx.trace_functional(x) for x in u.rows]
    images = []
    for j in range(ctx.n):
        img = 0
        for i, t in enumerate(funcs):
            img |= (t >> j & 1) << i
        images.append(img)
    return Subspace(ctx, gf2.kernel(images))


def scale(u: Subspace, r: int) -> Subspace:
    if r == 0:
        raise FieldError("scaling by zero")
    ctx = u.ctx
    return Subspace.span(ctx, (ctx.mul(r, x) for x in u.rows))


def frobenius(u: Subspace, times: int = 1) -> Subspace:
    ctx = u.ctx
    return Subspace.span(ctx, (ctx.frobenius(x, times) for x in u.rows))


def group_image(u: Subspace, action: str, r: int = 1) -> Subspace:
    if action == "scale":
        return scale(u, r)
    if action == "frobenius":
        return frobenius(u)
    raise GeometryError(f"unknown action {action!r}")


def whole_space(ctx: FieldContext) -> Subspace:
    return Subspace(ctx, tuple(1 << i for i in reversed(range(ctx.n))))


def zero_space(ctx: FieldContext) -> Subspace:
    return Subspace(ctx, ())


def subfield(ctx: FieldContext, s: int) -> Subspace:
    """F_{2^s} as an F_2-subspace."""
    if s == 1:
        return span(ctx, [1])
    g = ctx.subfield_generator(s)
    return span(ctx, (ctx.pow(g, i) for i in range(s)))
