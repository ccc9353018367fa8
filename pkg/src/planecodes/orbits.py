"""Orbits of planes under G = <x -> r x, Frobenius>, and the special planes
whose collision matrices carry an entry 4."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from . import gf2
from .field import FieldContext
from .geometry import GeometryError, Subspace, _rref_subspaces, intersect, span
from .sigma import missing_points

LONG_RUN_ORBIT_N = 11


@dataclass(frozen=True)
class OrbitReport:
    representative: Subspace
    size: int


def group_order(n: int) -> int:
    return n * ((1 << n) - 1)


def planes_through_one(ctx: FieldContext) -> Iterator[tuple[int, ...]]:
    """RREF rows of every plane containing 1, ascending.

    A plane holds 1 iff its last RREF row is 1, so these are the lines of
    the bits 1..n-1 with the row 1 appended."""
    for rows in _rref_subspaces(list(range(1, ctx.n)), 2):
        yield rows + (1,)


def orbit_members_through_one(w: Subspace) -> set[tuple[int, ...]]:
    """All members of the orbit of W that contain 1, as RREF rows.

    Every such member is w^-1 phi^j(W) with w a nonzero element of phi^j(W)."""
    ctx = w.ctx
    out = set()
    for j in range(ctx.n):
        img = [ctx.frobenius(x, j) for x in w.rows]
        for x in gf2.span_points(img)[1:]:
            xi = ctx.inv(x)
            out.add(gf2.rref(ctx.mul(xi, y) for y in img))
    return out


def _report(ctx: FieldContext, members: set[tuple[int, ...]]) -> OrbitReport:
    # |orbit| * 7 = (#members through 1) * (2^n - 1) by double counting
    # pairs (plane, nonzero point).
    rep = Subspace(ctx, min(members))
    return OrbitReport(rep, len(members) * ctx.q1 // 7)


def orbit_of(w: Subspace) -> OrbitReport:
    """Representative (least orbit member through 1) and orbit length."""
    if w.dim != 3:
        raise GeometryError("orbit_of expects a plane")
    return _report(w.ctx, orbit_members_through_one(w))


def orbit_representatives(ctx: FieldContext, long_run: bool = False) -> list[OrbitReport]:
    """One report per G-orbit of planes, ordered by representative."""
    n = ctx.n
    if n < 4:
        raise GeometryError("orbit sweep needs n >= 4")
    if n >= LONG_RUN_ORBIT_N and not long_run:
        raise GeometryError(f"orbit sweep at n={n} requires the long-run flag")
    seen: set[tuple[int, ...]] = set()
    out = []
    for rows in planes_through_one(ctx):
        if rows in seen:
            continue
        members = orbit_members_through_one(Subspace(ctx, rows))
        seen |= members
        out.append(_report(ctx, members))
    return out


def same_orbit(a: Subspace, b: Subspace) -> bool:
    return orbit_of(a).representative == orbit_of(b).representative


def f4_generator(ctx: FieldContext) -> int:
    if ctx.n % 2:
        raise GeometryError("F_4 is a subfield only for even n")
    return ctx.subfield_generator(2)


def special_planes(ctx: FieldContext) -> list[Subspace]:
    """Planes <1, a, b> with b^2 + b = omega (a^2 + a), omega generating F_4^x.

    Empty for odd n, where F_4 is not a subfield."""
    if ctx.n % 2:
        return []
    omega = f4_generator(ctx)
    found = set()
    for a in range(2, ctx.order):
        sol = ctx.hilbert90_solve(ctx.mul(omega, ctx.sqr(a) ^ a))
        if sol is None:
            continue
        for b in sol:
            found.add(span(ctx, [1, a, b]))
    return sorted(found)


def special_plane_count(n: int) -> int:
    return ((1 << (n - 2)) - 1) // 3


def mu_distribution(ctx: FieldContext) -> dict[int, int]:
    """Number of special planes with mu = 3..7."""
    counts = Counter(missing_points(w).mu for w in special_planes(ctx))
    return {mu: counts.get(mu, 0) for mu in range(3, 8)}


def pairwise_meet_in_one(planes: list[Subspace]) -> bool:
    if not planes:
        return True
    one = span(planes[0].ctx, [1])
    return all(
        intersect(planes[i], planes[j]) == one
        for i in range(len(planes))
        for j in range(i + 1, len(planes))
    )
