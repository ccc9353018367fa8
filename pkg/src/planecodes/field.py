"""Arithmetic in F_{2^n} with Conway-polynomial moduli.

Elements are ints whose bit i is the coefficient of alpha^i, alpha being a
root of the modulus.  Multiplication goes through exp/log tables.
"""

from __future__ import annotations

from functools import lru_cache

from . import gf2

# Conway polynomials over F_2 as bitmasks (bit i = coefficient of x^i).
CONWAY = {
    3: 0x0B,
    4: 0x13,
    5: 0x25,
    6: 0x5B,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x46F,
    11: 0x805,
    12: 0x10EB,
    13: 0x201B,
}

# Only used for statistics that do not depend on the modulus (mu counts of
# special planes at n = 14, 16); reachable with extended=True.
CONWAY_EXTENDED = {14: 0x40A9, 16: 0x1002D}


class FieldError(ValueError):
    pass


def _clmul_mod(a: int, b: int, modulus: int, n: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> n & 1:
            a ^= modulus
    return r


class FieldContext:
    """The field F_{2^n}; immutable once built."""

    def __init__(self, n: int, modulus: int):
        self.n = n
        self.modulus = modulus
        self.order = 1 << n
        self.q1 = self.order - 1
        q1 = self.q1
        exp = [0] * (2 * q1)
        log = [-1] * self.order
        x = 1
        for k in range(q1):
            if log[x] != -1:
                raise FieldError(f"modulus {modulus:#x} is not primitive")
            exp[k] = x
            log[x] = k
            x = _clmul_mod(x, 2, modulus, n)
        if x != 1:
            raise FieldError(f"modulus {modulus:#x} is not primitive")
        exp[q1:] = exp[:q1]
        self.exp = exp
        self.log = log
        # Tr(x) = parity(x & trace_mask)
        self.trace_mask = sum(self._slow_trace(1 << i) << i for i in range(n))

    def __repr__(self) -> str:
        return f"FieldContext(n={self.n}, modulus={self.modulus:#x})"

    def __reduce__(self):
        return (field_context, (self.n, self.n not in CONWAY))

    # basic arithmetic

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise FieldError("division by zero")
        if a == 0:
            return 0
        return self.exp[self.log[a] - self.log[b] + self.q1]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no inverse")
        return self.exp[self.q1 - self.log[a]]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise FieldError("zero has no inverse")
            return 1 if e == 0 else 0
        return self.exp[(self.log[a] * e) % self.q1]

    def sqr(self, a: int) -> int:
        return self.exp[2 * self.log[a]] if a else 0

    def frobenius(self, a: int, times: int = 1) -> int:
        """a^(2^times)."""
        if a == 0:
            return 0
        return self.exp[(self.log[a] << (times % self.n)) % self.q1]

    def alpha(self, k: int) -> int:
        """alpha^k."""
        return self.exp[k % self.q1]

    def prod(self, values) -> int:
        s = 0
        for v in values:
            if v == 0:
                return 0
            s += self.log[v]
        return self.exp[s % self.q1]

    # traces

    def _slow_trace(self, x: int, s: int = 1) -> int:
        acc = 0
        y = x
        for _ in range(self.n // s):
            acc ^= y
            for _ in range(s):
                y = _clmul_mod(y, y, self.modulus, self.n)
        return acc

    def trace(self, x: int, s: int = 1) -> int:
        """Trace from F_{2^n} down to the subfield F_{2^s}."""
        if s <= 0 or self.n % s:
            raise FieldError(f"F_2^{s} is not a subfield of F_2^{self.n}")
        if s == 1:
            return (x & self.trace_mask).bit_count() & 1
        acc = 0
        for i in range(self.n // s):
            acc ^= self.frobenius(x, s * i)
        return acc

    def trace_functional(self, c: int) -> int:
        """Mask t with Tr(c*y) = parity(y & t) for all y."""
        t = 0
        for i in range(self.n):
            t |= self.trace(self.mul(c, 1 << i)) << i
        return t

    def hilbert90_solve(self, y: int) -> tuple[int, int] | None:
        """Both roots of u^2 + u = y, or None when Tr(y) = 1."""
        if self.trace(y):
            return None
        images = [self.sqr(1 << i) ^ (1 << i) for i in range(self.n)]
        u = gf2.solve(images, y)
        assert u is not None
        return (u, u ^ 1) if u < u ^ 1 else (u ^ 1, u)

    def subfield_generator(self, s: int) -> int:
        """alpha^((2^n-1)/(2^s-1)), a primitive element of F_{2^s}."""
        if self.n % s:
            raise FieldError(f"F_2^{s} is not a subfield of F_2^{self.n}")
        return self.alpha(self.q1 // ((1 << s) - 1))

    # formatting

    def fmt(self, x: int) -> str:
        """'a^k' for nonzero x and '0x0' for zero; parse() inverts it."""
        if x == 0:
            return "0x0"
        return f"a^{self.log[x]}"

    def parse(self, token: str) -> int:
        """Parse 'a^k', a bare exponent 'k' (so '0' is 1) or '0x..' (bit pattern)."""
        token = token.strip()
        if token.startswith(("0x", "0X")):
            x = int(token, 16)
        elif token.startswith(("a^", "alpha^")):
            return self.alpha(int(token.split("^", 1)[1]))
        else:
            return self.alpha(int(token))
        if x >> self.n:
            raise FieldError(f"{token} does not fit in F_2^{self.n}")
        return x


@lru_cache(maxsize=None)
def _context(n: int) -> FieldContext:
    return FieldContext(n, CONWAY.get(n) or CONWAY_EXTENDED[n])


def field_context(n: int, extended: bool = False) -> FieldContext:
    """The shared context for degree n (3..13, or 14 and 16 with extended)."""
    if n in CONWAY or (extended and n in CONWAY_EXTENDED):
        return _context(n)
    raise FieldError(f"unsupported degree n={n}; supported range is 3..13")
