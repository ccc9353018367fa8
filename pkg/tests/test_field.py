import pickle

import pytest
from hypothesis import given, strategies as st

from planecodes.field import CONWAY, CONWAY_EXTENDED, FieldError, field_context

import oracles


def test_moduli_match_independent_conway_search():
    found = oracles.conway_search(16)
    for n, m in CONWAY.items():
        assert found[n] == m
    for n, m in CONWAY_EXTENDED.items():
        assert found[n] == m


@pytest.mark.parametrize("n,mod", [(4, 0b10011), (5, 0b100101), (6, 0b1011011)])
def test_small_moduli_from_the_examples(n, mod):
    assert field_context(n).modulus == mod


def test_unsupported_degrees():
    for n in (2, 14, 16, 20):
        with pytest.raises(FieldError):
            field_context(n)
    assert field_context(16, extended=True).n == 16
    with pytest.raises(FieldError):
        field_context(15, extended=True)


def test_alpha_is_primitive_root_of_modulus():
    for n in range(3, 14):
        ctx = field_context(n)
        assert ctx.alpha(1) == 2
        assert len(set(ctx.exp[: ctx.q1])) == ctx.q1
        assert oracles.poly_eval(ctx.modulus, 2, ctx.modulus, n) == 0


@pytest.mark.parametrize("n", [3, 5, 8, 11])
def test_mul_matches_shift_and_add(n):
    ctx = field_context(n)
    for a in range(0, ctx.order, max(1, ctx.order // 40)):
        for b in range(0, ctx.order, max(1, ctx.order // 37)):
            assert ctx.mul(a, b) == oracles.poly_mulmod(a, b, ctx.modulus, n)


@given(st.integers(3, 13), st.data())
def test_field_axioms(n, data):
    ctx = field_context(n)
    el = st.integers(0, ctx.q1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
    assert ctx.sqr(a ^ b) == ctx.sqr(a) ^ ctx.sqr(b)
    if a:
        assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.div(b, a) == ctx.mul(b, ctx.inv(a))
        assert ctx.pow(a, -1) == ctx.inv(a)
    assert ctx.frobenius(a, n) == a
    assert ctx.frobenius(a, 2) == ctx.sqr(ctx.sqr(a))


def test_inverse_of_one_and_zero_errors():
    ctx = field_context(5)
    assert ctx.inv(1) == 1
    with pytest.raises(FieldError):
        ctx.inv(0)
    with pytest.raises(FieldError):
        ctx.div(3, 0)
    assert ctx.pow(0, 0) == 1


def test_defining_relations():
    f32 = field_context(5)
    assert f32.alpha(5) == f32.alpha(2) ^ 1
    f16 = field_context(4)
    xi = f16.alpha(1)
    omega = f16.pow(xi, 5)
    assert omega == f16.sqr(xi) ^ xi
    assert f16.mul(omega, f16.sqr(omega) ^ omega) == omega


@pytest.mark.parametrize("n", range(3, 12))
def test_trace_against_power_sum(n):
    ctx = field_context(n)
    for x in range(ctx.order):
        assert ctx.trace(x) == oracles.slow_trace(x, ctx.modulus, n)


def test_trace_examples():
    assert field_context(3).trace(1) == 1
    f16 = field_context(4)
    zero_trace = [0, 1] + [f16.alpha(k) for k in (1, 2, 4, 5, 8, 10)]
    assert all(f16.trace(x) == 0 for x in zero_trace)
    assert sum(f16.trace(x) for x in range(16)) == 8


@given(st.integers(0, 63))
def test_trace_frobenius_invariant(x):
    ctx = field_context(6)
    assert ctx.trace(ctx.sqr(x)) == ctx.trace(x)


def test_relative_trace_lands_in_subfield():
    ctx = field_context(6)
    f4 = {0, 1, ctx.subfield_generator(2), ctx.subfield_generator(2) ^ 1}
    for x in range(64):
        assert ctx.trace(x, 2) in f4
        assert ctx.trace(x, 6) == x


@given(st.integers(4, 10), st.data())
def test_trace_functional(n, data):
    ctx = field_context(n)
    c = data.draw(st.integers(0, ctx.q1))
    y = data.draw(st.integers(0, ctx.q1))
    t = ctx.trace_functional(c)
    assert (y & t).bit_count() % 2 == ctx.trace(ctx.mul(c, y))


def test_hilbert90():
    for n in (4, 5, 6):
        ctx = field_context(n)
        for y in range(ctx.order):
            sols = sorted(u for u in range(ctx.order) if ctx.sqr(u) ^ u == y)
            got = ctx.hilbert90_solve(y)
            if ctx.trace(y):
                assert got is None and not sols
            else:
                assert list(got) == sols
    f16 = field_context(4)
    assert f16.hilbert90_solve(0) == (0, 1)
    assert f16.hilbert90_solve(f16.alpha(5)) is not None


def test_subfield_generator_orders():
    ctx = field_context(12)
    for s in (1, 2, 3, 4, 6, 12):
        g = ctx.subfield_generator(s)
        assert ctx.pow(g, (1 << s) - 1) == 1
        assert all(ctx.pow(g, k) != 1 for k in range(1, (1 << s) - 1))
    with pytest.raises(FieldError):
        ctx.subfield_generator(5)


def test_parse_and_format_round_trip():
    ctx = field_context(7)
    for x in range(ctx.order):
        assert ctx.parse(ctx.fmt(x)) == x
    assert ctx.parse("0") == 1
    assert ctx.parse("3") == ctx.alpha(3)
    assert ctx.parse("0x5") == 5
    with pytest.raises(FieldError):
        ctx.parse("0x1ff")


def test_context_pickles_to_cached_instance():
    ctx = field_context(9)
    assert pickle.loads(pickle.dumps(ctx)) is ctx
    ext = field_context(14, extended=True)
    assert pickle.loads(pickle.dumps(ext)) is ext
