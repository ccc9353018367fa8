"""Subspace codes in V = W x F_{2^n}.

A vector (x, y) with x in W and y in F_{2^n} is packed as
(coordinates of x in the W basis) << n | y, so V has 3 + n bits and the
special subspace S = {0} x F_{2^n} is the span of the low n bits.  Code
words are planes of V stored as RREF row tuples.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from . import gf2
from .field import FieldContext, field_context
from .geometry import GeometryError, Subspace, enumerate_subspaces, lines, span, subfield
from .linpoly import delta, delta_pair
from .rrp import RRPSolution
from .sigma import _PlaneSigma, collision_space


class CodeError(ValueError):
    pass


class AmbientSpace:
    def __init__(self, w: Subspace):
        if w.dim != 3:
            raise GeometryError("W must be a plane")
        self.ctx = w.ctx
        self.n = w.n
        self.w = w
        self.w_basis = w.rows
        # coordinates: w_basis[0] -> bit 2, w_basis[1] -> bit 1, w_basis[2] -> bit 0
        self.coords = {}
        for c in range(8):
            x = 0
            for i in range(3):
                if c >> (2 - i) & 1:
                    x ^= self.w_basis[i]
            self.coords[x] = c
        self.elem = {c: x for x, c in self.coords.items()}

    @property
    def v(self) -> int:
        return self.n + 3

    def vec(self, x: int, y: int) -> int:
        return (self.coords[x] << self.n) | y

    def split(self, vec: int) -> tuple[int, int]:
        return self.elem[vec >> self.n], vec & (self.ctx.q1)

    def in_s(self, vec: int) -> bool:
        return vec >> self.n == 0


@dataclass
class SubspaceCode:
    ambient: AmbientSpace
    words: set = field(default_factory=set)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(sorted(self.words))

    def add(self, rows: Iterable[int]) -> tuple[int, ...]:
        r = gf2.rref(rows)
        if len(r) != 3:
            raise CodeError("code words must be planes")
        self.words.add(r)
        return r

    def union(self, other: "SubspaceCode") -> "SubspaceCode":
        return SubspaceCode(self.ambient, self.words | other.words)

    def write(self, path, meta: dict | None = None) -> None:
        """Text format, or JSON (with ``meta`` merged in) when path ends in .json."""
        amb = self.ambient
        if str(path).endswith(".json"):
            with open(path, "w") as fh:
                json.dump(self.to_json(meta), fh, indent=1)
                fh.write("\n")
            return
        with open(path, "w") as fh:
            fh.write(f"{amb.v} {amb.n} " + " ".join(format(r, "x") for r in amb.w_basis) + "\n")
            for word in sorted(self.words):
                fh.write(" ".join(format(r, "x") for r in word) + "\n")

    def to_json(self, meta: dict | None = None) -> dict:
        amb = self.ambient
        out = {"v": amb.v, "n": amb.n, "W": [format(r, "x") for r in amb.w_basis], "size": len(self)}
        out.update(meta or {})
        out["words"] = [[format(r, "x") for r in word] for word in sorted(self.words)]
        return out

    @classmethod
    def read(cls, path) -> "SubspaceCode":
        if str(path).endswith(".json"):
            with open(path) as fh:
                data = json.load(fh)
            if data["v"] != data["n"] + 3:
                raise CodeError("v != n + 3")
            ctx = field_context(data["n"])
            code = cls(AmbientSpace(span(ctx, (int(t, 16) for t in data["W"]))))
            for word in data["words"]:
                code.add(int(t, 16) for t in word)
            return code
        with open(path) as fh:
            head = fh.readline().split()
            v, n = int(head[0]), int(head[1])
            if v != n + 3:
                raise CodeError("header v != n + 3")
            ctx = field_context(n)
            amb = AmbientSpace(span(ctx, (int(t, 16) for t in head[2:5])))
            code = cls(amb)
            for line in fh:
                if line.strip():
                    code.add(int(t, 16) for t in line.split())
        return code


def graph_plane(amb: AmbientSpace, f) -> tuple[int, ...]:
    """Gamma_f = {(x, f(x)) : x in W} for an F_2-linear map f on W."""
    return tuple(amb.vec(x, f(x)) for x in amb.w_basis)


def gabidulin_map(ctx: FieldContext, a0: int, a1: int):
    return lambda x: ctx.mul(a0, x) ^ ctx.mul(a1, ctx.sqr(x))


def lifted_gabidulin(amb: AmbientSpace, exclude: set | None = None) -> SubspaceCode:
    """All 4^n planes Gamma_f, f = a0 x + a1 x^2, minus the pairs in exclude."""
    ctx = amb.ctx
    code = SubspaceCode(amb)
    exclude = exclude or set()
    ws = amb.w_basis
    sq = [ctx.sqr(x) for x in ws]
    hi = [amb.coords[x] << amb.n for x in ws]
    for a1 in range(ctx.order):
        part = [ctx.mul(a1, s) for s in sq]
        for a0 in range(ctx.order):
            if (a0, a1) in exclude:
                continue
            code.words.add(tuple(hi[i] | (ctx.mul(a0, ws[i]) ^ part[i]) for i in range(3)))
    return code


def expurgation_set(amb: AmbientSpace, solids: Iterable[int]) -> set[tuple[int, int]]:
    """Pairs (a0, a1) of all r (c x^2 + c^2 x), c in u + W, r != 0, over the solids u."""
    ctx = amb.ctx
    out = set()
    seen = set()
    for u in solids:
        if u in amb.w:
            raise CodeError("solid representative lies in W")
        key = gf2.reduce(u, amb.w.rows)
        if key in seen:
            raise CodeError("solids must be distinct")
        seen.add(key)
        for wv in amb.w.elements():
            c = u ^ wv
            c2 = ctx.sqr(c)
            for k in range(ctx.q1):
                r = ctx.exp[k]
                out.add((ctx.mul(r, c2), ctx.mul(r, c)))
    return out


def rearranged_plane(amb: AmbientSpace, z: Subspace, x: int, r: int) -> tuple[int, ...]:
    """U(Z, F_2 (0, r delta(Z)), r delta(x, .)): the new plane through (0, r delta(Z))."""
    ctx = amb.ctx
    rows = [amb.vec(a, ctx.mul(r, delta_pair(ctx, x, a))) for a in z.rows]
    rows.append(ctx.mul(r, delta(z)))
    return gf2.rref(rows)


def local_candidates(amb: AmbientSpace, solids: Iterable[int]):
    """(sigma, E, solid, new plane through P_1) for the 14 planes E != W in each solid."""
    ctx = amb.ctx
    ps = _PlaneSigma(amb.w)
    out = []
    for u in solids:
        for idx, x, y in ps.solid_values(u):
            z = ps.lines[idx]
            e = span(ctx, z.rows + (x,))
            n_plane = rearranged_plane(amb, z, x, ctx.inv(delta(z)))
            out.append((y, e, u, n_plane))
    return out


def new_planes_local(amb: AmbientSpace, solids: list[int], column_choice: dict[int, int] | None = None) -> SubspaceCode:
    """New planes through P_1 = F_2 (0, 1) for the selected solids.

    Planes whose sigma lies outside the collision space are all kept.  For
    each collision value exactly one preimage survives: the least E inside
    the solid named by column_choice (sigma value -> solid representative),
    or the least E overall when no choice is given.
    """
    cs = collision_space(amb.w)
    cands = local_candidates(amb, solids)
    code = SubspaceCode(amb)
    groups: dict[int, list] = {}
    for y, e, u, plane in cands:
        if y in cs:
            groups.setdefault(y, []).append((e, u, plane))
        else:
            code.words.add(plane)
    for y, group in groups.items():
        if column_choice is not None and y in column_choice:
            group = [g for g in group if g[1] == column_choice[y]]
            if not group:
                raise CodeError(f"chosen solid is not a preimage of {y:#x}")
        e, u, plane = min(group, key=lambda g: g[0].rows)
        code.words.add(plane)
    return code


def rotate(amb: AmbientSpace, word: tuple[int, ...], r: int) -> tuple[int, ...]:
    ctx = amb.ctx
    mask = ctx.q1
    return gf2.rref((v & ~mask) | ctx.mul(r, v & mask) for v in word)


def solution_solids(cm_rows, solution: RRPSolution) -> list[int]:
    return [cm_rows[i] for i in solution.selected_rows]


def assemble_code(amb: AmbientSpace, solids: list[int], column_choice: dict[int, int] | None = None) -> SubspaceCode:
    """Expurgated lifted Gabidulin code plus all rotations of the local new planes."""
    ctx = amb.ctx
    exp = expurgation_set(amb, solids)
    code = lifted_gabidulin(amb, exclude=exp)
    local = new_planes_local(amb, solids, column_choice)
    for k in range(ctx.q1):
        r = ctx.exp[k]
        for word in local.words:
            code.words.add(rotate(amb, word, r))
    return code


def assemble_from_solution(cm, solution: RRPSolution) -> SubspaceCode:
    amb = AmbientSpace(cm.w)
    solids = solution_solids(cm.rows, solution)
    choice = {cm.cols[j]: cm.rows[i] for j, i in solution.column_choice.items()}
    return assemble_code(amb, solids, choice)


def expected_size(n: int, net_gain: int) -> int:
    return 4 ** n + net_gain * ((1 << n) - 1)


# verification

def plane_lines(word: tuple[int, ...]) -> list[tuple[int, ...]]:
    a, b, c = word
    gens = [(a, b), (a, c), (b, c), (a, b ^ c), (b, a ^ c), (c, a ^ b), (a ^ b, a ^ c)]
    return [gf2.rref(g) for g in gens]


def min_distance_at_least_4(code: SubspaceCode):
    """(True, None) if no two words share a line, else (False, (word1, word2))."""
    owner: dict[tuple[int, ...], tuple[int, ...]] = {}
    for word in code.words:
        for ln in plane_lines(word):
            prev = owner.get(ln)
            if prev is not None and prev != word:
                return False, (prev, word)
            owner[ln] = word
    return True, None


def min_distance_pairwise(code: SubspaceCode) -> bool:
    """Oracle: every pair of words spans at least a 5-space."""
    words = sorted(code.words)
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            if gf2.rank(words[i] + words[j]) < 5:
                return False
    return True


def line_cover_check(code: SubspaceCode) -> Counter:
    """Multiplicity -> number of lines disjoint from S with that coverage (zero omitted)."""
    amb = code.ambient
    cnt: Counter = Counter()
    for word in code.words:
        for ln in plane_lines(word):
            a, b = ln
            if not (amb.in_s(a) or amb.in_s(b) or amb.in_s(a ^ b)):
                cnt[ln] += 1
    return Counter(cnt.values())


def local_points_check(amb: AmbientSpace, local: SubspaceCode) -> bool:
    """Planes through P_1 share no point outside S, i.e. pairwise meet only in P_1."""
    seen = set()
    for word in local.words:
        for p in gf2.span_points(word)[1:]:
            if amb.in_s(p):
                continue
            if p in seen:
                return False
            seen.add(p)
    return True


def is_rotation_invariant(code: SubspaceCode, rs: Iterable[int]) -> bool:
    amb = code.ambient
    return all(rotate(amb, w, r) in code.words for r in rs for w in code.words)


# codes of fixed last Dickson invariant

def fixed_dickson_code(ctx: FieldContext, k: int, a: int) -> list[Subspace]:
    """All k-subspaces U of F_{2^n} with delta(U) = a."""
    if a == 0:
        raise CodeError("delta of a subspace is never zero")
    return [u for u in enumerate_subspaces(ctx, k) if delta(u) == a]


# classic constructions

def standard_rearrangement(amb: AmbientSpace, u: int, r: int) -> list[tuple[int, ...]]:
    """The 14 new planes for the removed family r delta(u + W, x)."""
    out = []
    for z in lines(amb.w):
        c = next(x for x in amb.w.rows if x not in z)
        for x in (u, u ^ c):
            out.append(rearranged_plane(amb, z, x, r))
    return out


def remove_iii(v: int) -> SubspaceCode:
    """W = F_8, removed families R, r(R minus T), ..., r^(s-1)(R minus T), r primitive."""
    n = v - 3
    if n % 3 or n < 3:
        raise CodeError("needs v divisible by 3 and v >= 6")
    ctx = field_context(n)
    w = subfield(ctx, 3)
    amb = AmbientSpace(w)
    s = ctx.q1 // 7
    removed = set()
    new = []
    reps = [0] + [u for u in range(1, ctx.order) if gf2.reduce(u, w.rows) == u]
    for i in range(s):
        r = ctx.exp[i]
        for u in reps:
            if i > 0 and u == 0:
                continue
            for wv in w.elements():
                c = u ^ wv
                removed.add((ctx.mul(r, ctx.sqr(c)), ctx.mul(r, c)))
            new.extend(standard_rearrangement(amb, u, r))
    code = lifted_gabidulin(amb, exclude=removed)
    code.words.update(new)
    return code


def remove_iii_size(v: int) -> int:
    n = v - 3
    return 4 ** n + 3 * (4 ** (n - 1) - 9 * 2 ** (n - 2) + 16) // 7


def v6_optimal() -> SubspaceCode:
    """The 70-word code at v = 6 plus 7 planes joining (x, x^3) to {y : Tr(x^4 y) = 0}."""
    code = remove_iii(6)
    amb = code.ambient
    ctx = amb.ctx
    for x in range(1, 8):
        t = ctx.frobenius(x, 2)
        hyper = [y for y in range(1, 8) if ctx.trace(ctx.mul(t, y)) == 0]
        code.add([amb.vec(x, ctx.pow(x, 3))] + hyper)
    return code


def classic_constructions(variant: str, v: int | None = None) -> SubspaceCode:
    if variant == "v6_optimal":
        return v6_optimal()
    if variant == "remove_iii":
        if v is None:
            raise CodeError("remove_iii needs v")
        return remove_iii(v)
    raise CodeError(f"unknown construction {variant!r}")
