import pytest
from hypothesis import given, strategies as st

from planecodes import gf2
from planecodes.field import FieldError, field_context
from planecodes.geometry import (
    GeometryError,
    Subspace,
    enumerate_space,
    enumerate_subspaces,
    frobenius,
    gaussian_binomial,
    group_image,
    intersect,
    join,
    lattice,
    lines,
    quotient_reps,
    scale,
    span,
    subfield,
    subspaces_of,
    superspaces,
    trace_orthogonal,
    whole_space,
    zero_space,
)

import oracles


def as_set(u):
    return frozenset(u.elements())


def vectors(n, k):
    return st.lists(st.integers(0, (1 << n) - 1), max_size=k)


# gf2 helpers

@given(vectors(10, 8))
def test_rref_rank_and_span(vs):
    r = gf2.rref(vs)
    assert len(r) == gf2.rank(vs) == oracles.naive_rank(vs)
    assert list(r) == sorted(r, reverse=True)
    assert oracles.closure(r) == oracles.closure(vs)
    mask = gf2.pivot_mask(r)
    for row in r:
        top = 1 << (row.bit_length() - 1)
        assert (row & mask) == top


@given(vectors(9, 6), st.integers(0, 511))
def test_reduce_gives_least_coset_element(vs, x):
    r = gf2.rref(vs)
    red = gf2.reduce(x, r)
    assert red == min(x ^ p for p in oracles.closure(r))


@given(st.lists(st.integers(0, 255), min_size=1, max_size=8), st.integers(0, 255))
def test_solve_and_kernel(images, target):
    c = gf2.solve(images, target)
    reach = {}
    for mask in range(1 << len(images)):
        v = 0
        for i, im in enumerate(images):
            if mask >> i & 1:
                v ^= im
        reach.setdefault(v, []).append(mask)
    if c is None:
        assert target not in reach
    else:
        assert c in reach[target]
    ker = gf2.kernel(images)
    assert oracles.closure(ker) == frozenset(reach[0])


def test_span_points_order():
    pts = gf2.span_points([4, 2])
    assert pts == [0, 4, 2, 6]


# subspaces

def test_span_examples():
    ctx = field_context(4)
    assert span(ctx, []).dim == 0
    xi = ctx.alpha(1)
    u = span(ctx, [1, xi, ctx.sqr(xi), xi ^ 1])
    assert u.dim == 3
    assert ctx.alpha(4) in u
    f32 = field_context(5)
    w = span(f32, [1, 2, 4])
    assert w == Subspace(f32, (4, 2, 1))
    assert w.points() == [1, 2, 3, 4, 5, 6, 7]


def test_span_canonicalises_and_json_round_trips():
    ctx = field_context(5)
    assert Subspace.span(ctx, [3, 1, 2]) == Subspace(ctx, (2, 1))
    w = span(ctx, [1, ctx.alpha(7), ctx.alpha(13)])
    assert Subspace.from_json(ctx, w.to_json()) == w
    assert len(w) == 8


@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumeration_matches_brute_force(n):
    ctx = field_context(n)
    for k in range(n + 1):
        got = [as_set(u) for u in enumerate_subspaces(ctx, k)]
        assert len(got) == len(set(got)) == gaussian_binomial(n, k)
        if k <= 3:
            assert set(got) == oracles.all_subspaces(n, k)
    got = list(enumerate_subspaces(ctx, 2))
    assert got == sorted(got, key=lambda u: u.rows)


def test_gaussian_binomials():
    assert gaussian_binomial(6, 3) == 1395
    assert gaussian_binomial(5, 2) == 155
    assert gaussian_binomial(7, 0) == 1
    assert gaussian_binomial(3, 5) == 0
    assert sum(1 for _ in enumerate_subspaces(field_context(6), 3)) == 1395


def random_subspace(ctx, data, max_dim):
    gens = data.draw(st.lists(st.integers(1, ctx.q1), max_size=max_dim))
    return span(ctx, gens)


@given(st.data())
def test_lattice_operations(data):
    ctx = field_context(7)
    a = random_subspace(ctx, data, 5)
    b = random_subspace(ctx, data, 5)
    meet = intersect(a, b)
    sp = join(a, b)
    assert as_set(meet) == as_set(a) & as_set(b)
    assert as_set(sp) == oracles.closure(list(a.rows) + list(b.rows))
    assert meet.dim + sp.dim == a.dim + b.dim
    assert intersect(a, a) == a
    assert lattice(a, b, "intersect") == meet
    assert lattice(a, b, "sum") == sp
    assert sp.contains(a) and a.contains(meet)


def test_two_planes_through_a_line_span_a_solid():
    ctx = field_context(6)
    assert join(span(ctx, [1, 2, 4]), span(ctx, [1, 2, 8])).dim == 4


def test_trace_zero_plane_meets_its_multiples_in_lines():
    ctx = field_context(4)
    w = Subspace(ctx, tuple(gf2.kernel([ctx.trace(1 << i) for i in range(4)])))
    assert w.dim == 3
    for a in range(2, 16):
        assert intersect(w, scale(w, a)).dim == 2


@pytest.mark.parametrize("n,k", [(5, 2), (6, 3), (7, 1)])
def test_sub_and_superspaces(n, k):
    ctx = field_context(n)
    u = next(iter(enumerate_subspaces(ctx, k)))
    for j in range(k + 1):
        subs = subspaces_of(u, j)
        assert len(subs) == len(set(subs)) == gaussian_binomial(k, j)
        assert all(u.contains(s) and s.dim == j for s in subs)
    for j in range(k, n + 1):
        sups = superspaces(u, j)
        assert len(sups) == len(set(sups)) == gaussian_binomial(n - k, j - k)
        assert all(s.contains(u) for s in sups)
    if k >= 2:
        assert len(lines(u)) == gaussian_binomial(k, 2)


def test_quotient_representatives():
    for n in (5, 7):
        ctx = field_context(n)
        w = span(ctx, [1, ctx.alpha(1), ctx.alpha(2)])
        reps = quotient_reps(w)
        assert len(reps) == (1 << (n - 3)) - 1
        assert reps == sorted(reps)
        cosets = {frozenset(r ^ x for x in w.elements()) for r in reps}
        assert len(cosets) == len(reps)
        assert all(r == min(r ^ x for x in w.elements()) for r in reps)
    f32 = field_context(5)
    assert len(superspaces(span(f32, [1, 2, 4]), 4)) == 3


def test_enumerate_space_modes():
    ctx = field_context(5)
    w = span(ctx, [1, 2, 4])
    assert len(list(enumerate_space(ctx, "subspaces", k=2))) == 155
    assert len(list(enumerate_space(ctx, "superspaces", k=4, u=w))) == 3
    assert list(enumerate_space(ctx, "quotient_reps", u=w)) == quotient_reps(w)
    with pytest.raises(GeometryError):
        enumerate_space(ctx, "nothing")


def test_trace_orthogonal_brute_force():
    for n in (4, 5, 6):
        ctx = field_context(n)
        for u in list(enumerate_subspaces(ctx, 2))[::7]:
            perp = {y for y in range(ctx.order) if all(ctx.trace(ctx.mul(x, y)) == 0 for x in u.elements())}
            assert as_set(trace_orthogonal(u)) == perp
            assert trace_orthogonal(u).dim == n - 2
    ctx = field_context(6)
    assert trace_orthogonal(whole_space(ctx)) == zero_space(ctx)


def test_collision_space_examples():
    f32 = field_context(5)
    w = span(f32, [1, f32.alpha(1), f32.alpha(2)])
    perp = trace_orthogonal(frobenius(w))
    assert sorted(perp.points()) == sorted(f32.alpha(k) for k in (23, 25, 28))
    f16 = field_context(4)
    w = Subspace(f16, tuple(gf2.kernel([f16.trace(1 << i) for i in range(4)])))
    assert trace_orthogonal(frobenius(w)) == trace_orthogonal(w) == span(f16, [1])


def test_scaled_subfield_lines_are_the_standard_spread():
    ctx = field_context(4)
    f4 = subfield(ctx, 2)
    spread = {scale(f4, ctx.alpha(i)) for i in range(15)}
    assert len(spread) == 5
    pts = [p for line in spread for p in line.points()]
    assert sorted(pts) == list(range(1, 16))
    assert scale(f4, 1) == f4
    with pytest.raises(FieldError):
        scale(f4, 0)


@given(st.data())
def test_frobenius_has_order_n(data):
    ctx = field_context(4)
    u = random_subspace(ctx, data, 3)
    assert frobenius(frobenius(frobenius(u, 2), 1), 1) == u
    assert group_image(u, "frobenius") == frobenius(u)
    assert group_image(u, "scale", 3) == scale(u, 3)


def test_subfields_are_closed():
    ctx = field_context(12)
    for s in (1, 2, 3, 4, 6):
        f = subfield(ctx, s)
        assert f.dim == s
        els = f.elements()
        assert all(ctx.mul(a, b) in f for a in els[:8] for b in els[:8])
