"""Linear algebra over F_2 with vectors packed into Python ints."""

from __future__ import annotations

from typing import Iterable


def rref(vectors: Iterable[int]) -> tuple[int, ...]:
    """Reduced row echelon basis of the span, rows sorted by descending pivot."""
    pivots: dict[int, int] = {}
    for v in vectors:
        for p, row in pivots.items():
            if v >> p & 1:
                v ^= row
        if not v:
            continue
        p = v.bit_length() - 1
        for q in pivots:
            if pivots[q] >> p & 1:
                pivots[q] ^= v
        pivots[p] = v
    return tuple(pivots[p] for p in sorted(pivots, reverse=True))


def reduce(v: int, basis: tuple[int, ...]) -> int:
    """Reduce v modulo a basis in RREF; the result is the least element of the coset."""
    for row in basis:
        if v >> (row.bit_length() - 1) & 1:
            v ^= row
    return v


def rank(vectors: Iterable[int]) -> int:
    return len(rref(vectors))


def pivot_mask(basis: tuple[int, ...]) -> int:
    m = 0
    for row in basis:
        m |= 1 << (row.bit_length() - 1)
    return m


def span_points(basis: Iterable[int]) -> list[int]:
    """All 2^k elements of the span, with index i holding the combination with mask i."""
    pts = [0]
    for b in basis:
        pts += [p ^ b for p in pts]
    return pts


def solve(images: list[int], target: int) -> int | None:
    """Find a coefficient mask c with XOR of images[i] over set bits of c equal to target."""
    rows: dict[int, tuple[int, int]] = {}
    for i, img in enumerate(images):
        combo = 1 << i
        for p, (r, c) in rows.items():
            if img >> p & 1:
                img ^= r
                combo ^= c
        if img:
            p = img.bit_length() - 1
            for q in list(rows):
                r, c = rows[q]
                if r >> p & 1:
                    rows[q] = (r ^ img, c ^ combo)
            rows[p] = (img, combo)
    out = 0
    for p, (r, c) in rows.items():
        if target >> p & 1:
            target ^= r
            out ^= c
    return None if target else out


def kernel(images: list[int]) -> tuple[int, ...]:
    """Basis (in RREF) of the kernel of the linear map sending unit vector i to images[i]."""
    rows: dict[int, tuple[int, int]] = {}
    null: list[int] = []
    for i, img in enumerate(images):
        combo = 1 << i
        for p, (r, c) in rows.items():
            if img >> p & 1:
                img ^= r
                combo ^= c
        if img:
            p = img.bit_length() - 1
            for q in list(rows):
                r, c = rows[q]
                if r >> p & 1:
                    rows[q] = (r ^ img, c ^ combo)
            rows[p] = (img, combo)
        else:
            null.append(combo)
    return rref(null)


def deposit(x: int, positions: list[int]) -> int:
    """Spread the low bits of x into the given bit positions (lowest bit first)."""
    out = 0
    for i, p in enumerate(positions):
        if x >> i & 1:
            out |= 1 << p
    return out
