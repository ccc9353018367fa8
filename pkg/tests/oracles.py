"""Slow, independent reference implementations used to check the package.

Nothing here imports planecodes: field elements are plain polynomials over
F_2 multiplied by shift-and-add, and subspaces are frozensets of vectors.
"""

from itertools import combinations, product

import sympy


def poly_mulmod(a, b, modulus, n):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> n & 1:
            a ^= modulus
    return r


def poly_pow(a, e, modulus, n):
    r = 1
    while e:
        if e & 1:
            r = poly_mulmod(r, a, modulus, n)
        a = poly_mulmod(a, a, modulus, n)
        e >>= 1
    return r


def poly_eval(poly, x, modulus, n):
    """Evaluate a polynomial over F_2 (bitmask) at a field element."""
    r, p, i = 0, 1, 0
    while poly >> i:
        if poly >> i & 1:
            r ^= p
        p = poly_mulmod(p, x, modulus, n)
        i += 1
    return r


def conway_search(up_to):
    """Least primitive polynomial of each degree compatible with the smaller ones.

    Over F_2 the Conway order on monic polynomials coincides with integer order
    of the coefficient bitmask, so the first hit in ascending order wins."""
    found = {1: 0b11}
    for n in range(2, up_to + 1):
        q1 = (1 << n) - 1
        primes = list(sympy.factorint(q1))
        for m in range((1 << n) | 1, 1 << (n + 1), 2):
            if poly_pow(2, q1, m, n) != 1:
                continue
            if any(poly_pow(2, q1 // p, m, n) == 1 for p in primes):
                continue
            if all(poly_eval(found[d], poly_pow(2, q1 // ((1 << d) - 1), m, n), m, n) == 0
                   for d in range(1, n) if n % d == 0):
                found[n] = m
                break
    return found


def slow_trace(x, modulus, n):
    t, y = 0, x
    for _ in range(n):
        t ^= y
        y = poly_mulmod(y, y, modulus, n)
    return t


def closure(gens):
    pts = {0}
    for g in gens:
        pts |= {p ^ g for p in pts}
    return frozenset(pts)


def all_subspaces(n, k):
    """Every k-subspace of F_2^n as a frozenset, by closing all k-sets of vectors."""
    out = set()
    for gens in combinations(range(1, 1 << n), k):
        s = closure(gens)
        if len(s) == 1 << k:
            out.add(s)
    return out


def naive_rank(vectors):
    rows = [v for v in vectors if v]
    r = 0
    while rows:
        piv = max(rows)
        top = piv.bit_length() - 1
        rows = [v ^ piv if v >> top & 1 else v for v in rows if v != piv]
        rows = [v for v in rows if v]
        r += 1
    return r


def combos(xs):
    """All nonzero F_2-combinations of the list xs (with repetitions if dependent)."""
    out = []
    for mask in product((0, 1), repeat=len(xs)):
        if any(mask):
            v = 0
            for b, x in zip(mask, xs):
                if b:
                    v ^= x
            out.append(v)
    return out
