"""Selecting solids to maximise the local net gain, and the bounds around it.

Objective for a 0/1 row selection x of a collision matrix C:
    sum_i (6 - r_i) x_i + #{columns j : (x C)_j > 0}
with r_i the row sums.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .geometry import gaussian_binomial
from .sigma import AssociatedCode, CollisionMatrix

DEFAULT_NODE_BUDGET = 1 << 26


class RRPError(ValueError):
    pass


@dataclass(frozen=True)
class RRPSolution:
    selected_rows: tuple[int, ...]      # indices into the matrix rows
    net_gain: int
    column_choice: dict[int, int] = field(default_factory=dict)   # column -> selected row used
    proven: bool = True
    mode: str = "exact"
    nodes: int = 0

    def to_json(self, cm: CollisionMatrix) -> dict:
        return {
            "n": cm.ctx.n,
            "W": cm.w.to_json(),
            "I": [format(cm.rows[i], "x") for i in self.selected_rows],
            "rows": list(self.selected_rows),
            "N1": self.net_gain,
            "proven": self.proven,
            "mode": self.mode,
            "bounds": list(gain_bounds(cm)),
        }


def _supports(cm: CollisionMatrix) -> list[int]:
    return [sum(1 << j for j, c in enumerate(r) if c) for r in cm.entries]


def objective(cm: CollisionMatrix, x) -> int:
    """Net gain of the 0/1 row selection x."""
    if len(x) != cm.order:
        raise RRPError("selection length differs from matrix order")
    rs = cm.row_sums()
    cost = 0
    covered = [False] * len(cm.cols)
    for i, xi in enumerate(x):
        if xi:
            cost += 6 - rs[i]
            for j, c in enumerate(cm.entries[i]):
                if c:
                    covered[j] = True
    return cost + sum(covered)


def _column_choice(cm: CollisionMatrix, rows) -> dict[int, int]:
    choice = {}
    for i in sorted(rows):
        for j, c in enumerate(cm.entries[i]):
            if c and j not in choice:
                choice[j] = i
    return choice


def _solution(cm, rows, gain, proven, mode, nodes=0) -> RRPSolution:
    rows = tuple(sorted(rows))
    return RRPSolution(rows, gain, _column_choice(cm, rows), proven, mode, nodes)


class _BranchAndBound:
    def __init__(self, gains, supports, order_key, budget, incumbent, allow_empty):
        self.gains = gains          # 6 - r_i per candidate
        self.supports = supports
        self.order_key = order_key  # static tie-break rank per candidate
        self.budget = budget
        self.nodes = 0
        self.best = incumbent
        self.best_set: list[int] | None = None
        self.exhausted = False
        self.allow_empty = allow_empty

    def run(self, value, covered, cands, chosen):
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        if value > self.best and (chosen or self.allow_empty):
            self.best = value
            self.best_set = list(chosen)
        # drop candidates that can no longer help: their marginal only shrinks
        live = []
        reach = 0
        for k in cands:
            c = (self.supports[k] & ~covered).bit_count()
            if self.gains[k] + c > 0:
                live.append((k, c))
                reach |= self.supports[k]
        if not live or value + self._bound(live, (reach & ~covered).bit_count()) <= self.best:
            return
        # branch on the largest marginal, ties by the static order
        k, c = max(live, key=lambda kc: (self.gains[kc[0]] + kc[1], -self.order_key[kc[0]]))
        rest = [j for j, _ in live if j != k]
        chosen.append(k)
        self.run(value + self.gains[k] + c, covered | self.supports[k], rest, chosen)
        chosen.pop()
        if self.exhausted:
            return
        self.run(value, covered, rest, chosen)

    def _bound(self, live, reachable):
        """LP relaxation of max sum g_k + min(reachable, sum c_k) over the live rows.

        Rows have g_k < 0, so the relaxation fills the reachable columns in
        order of coverage per unit cost and stops once they are used up."""
        order = sorted(live, key=lambda kc: kc[1] / -self.gains[kc[0]], reverse=True)
        room = reachable
        total = Fraction(0)
        for k, c in order:
            if room <= 0:
                break
            g = self.gains[k]
            if c <= room:
                total += c + g
                room -= c
            else:
                total += Fraction(room * (c + g), c)
                room = 0
        return int(total)


def _forced(cm: CollisionMatrix):
    rs = cm.row_sums()
    sup = _supports(cm)
    forced = [i for i in range(cm.order) if rs[i] <= 6]
    covered = 0
    value = 0
    for i in forced:
        value += 6 - rs[i]
        covered |= sup[i]
    return rs, sup, forced, covered, value + covered.bit_count()


def greedy(cm: CollisionMatrix) -> RRPSolution:
    """Forced rows, then repeatedly the row with the best positive marginal gain."""
    rs, sup, forced, covered, value = _forced(cm)
    chosen = list(forced)
    cands = sorted((i for i in range(cm.order) if rs[i] > 6), key=lambda i: (-rs[i], cm.rows[i]))
    while cands:
        g, idx = max((6 - rs[k] + (sup[k] & ~covered).bit_count(), -idx) for idx, k in enumerate(cands))
        if g <= 0 and chosen:
            break
        k = cands.pop(-idx)
        chosen.append(k)
        value += g
        covered |= sup[k]
    return _solution(cm, chosen, value, False, "greedy")


def local_search(cm: CollisionMatrix, rows) -> RRPSolution:
    """Improve a row set by single additions, removals and swaps until none helps."""
    rs = cm.row_sums()
    m = cm.order
    cols_of = [[j for j, c in enumerate(r) if c] for r in cm.entries]
    chosen = set(rows)
    cnt = [0] * len(cm.cols)
    for i in chosen:
        for j in cols_of[i]:
            cnt[j] += 1

    def add_gain(k):
        return 6 - rs[k] + sum(1 for j in cols_of[k] if cnt[j] == 0)

    def drop_gain(k):
        return rs[k] - 6 - sum(1 for j in cols_of[k] if cnt[j] == 1)

    def flip(k, d):
        for j in cols_of[k]:
            cnt[j] += d

    improved = True
    while improved:
        improved = False
        for k in range(m):
            if k not in chosen and add_gain(k) > 0:
                chosen.add(k)
                flip(k, 1)
                improved = True
        for k in sorted(chosen):
            if len(chosen) > 1 and drop_gain(k) > 0:
                chosen.discard(k)
                flip(k, -1)
                improved = True
        if improved:
            continue
        for a in sorted(chosen):
            da = drop_gain(a)
            flip(a, -1)
            b = next((b for b in range(m) if b not in chosen and da + add_gain(b) > 0), None)
            if b is not None:
                chosen.discard(a)
                chosen.add(b)
                flip(b, 1)
                improved = True
                break
            flip(a, 1)
    x = [1 if i in chosen else 0 for i in range(m)]
    return _solution(cm, chosen, objective(cm, x), False, "local")


def solve(cm: CollisionMatrix, mode: str = "exact", node_budget: int = DEFAULT_NODE_BUDGET,
          incumbent: int | None = None) -> RRPSolution:
    """Maximise the net gain over nonempty row sets.

    exact: rows with r_i <= 6 never lower the objective and are always taken;
    the remaining rows are settled by branch and bound, seeded with the
    greedy solution improved by local search.  When ``incumbent`` is given
    only solutions beating it are sought and the result may fall short of
    it (proven then means nothing better than the incumbent exists).
    greedy: forced rows plus marginal-gain greedy.
    """
    if cm.order == 0:
        raise RRPError("empty collision matrix")
    if mode == "greedy":
        return greedy(cm)
    if mode != "exact":
        raise RRPError(f"unknown mode {mode!r}")
    rs, sup, forced, covered, value = _forced(cm)
    optional = sorted((i for i in range(cm.order) if rs[i] > 6), key=lambda i: (-rs[i], cm.rows[i]))
    seed = local_search(cm, greedy(cm).selected_rows)
    start = seed.net_gain
    if incumbent is not None:
        start = max(start, incumbent)
    bb = _BranchAndBound(
        {k: 6 - rs[k] for k in optional},
        {k: sup[k] for k in optional},
        {k: pos for pos, k in enumerate(optional)},
        node_budget,
        start,
        bool(forced),
    )
    bb.run(value, covered, optional, [])
    proven = not bb.exhausted
    if bb.best_set is not None:
        return _solution(cm, forced + bb.best_set, bb.best, proven, "exact", bb.nodes)
    return RRPSolution(seed.selected_rows, seed.net_gain, seed.column_choice, proven, "exact", bb.nodes)


def brute_force(cm: CollisionMatrix) -> int:
    """Maximum objective over all nonempty row sets by full enumeration."""
    m = cm.order
    rs = cm.row_sums()
    sup = _supports(cm)
    cost = [0] * (1 << m)
    cover = [0] * (1 << m)
    best = None
    for s in range(1, 1 << m):
        low = (s & -s).bit_length() - 1
        prev = s & (s - 1)
        cost[s] = cost[prev] + 6 - rs[low]
        cover[s] = cover[prev] | sup[low]
        v = cost[s] + cover[s].bit_count()
        if best is None or v > best:
            best = v
    return best


def row_sum_counts(cm: CollisionMatrix) -> Counter:
    return Counter(cm.row_sums())


def gain_bounds(cm: CollisionMatrix, m_prime: int | None = None) -> tuple[int, int]:
    """(lower, upper) for the optimum: first term sum over r <= 5 of m_r (6 - r)."""
    rs = cm.row_sums()
    base = sum(6 - r for r in rs if r <= 5)
    if m_prime is None:
        cov = 0
        for i, r in enumerate(rs):
            if r <= 6:
                for j, c in enumerate(cm.entries[i]):
                    if c:
                        cov |= 1 << j
        m_prime = cov.bit_count()
    return base + m_prime, base + len(cm.cols)


# code sums

# Maximum code sum of a projective [mu, k] binary code, 1 <= k <= mu <= 7.
CODE_SUM_TABLE = {
    1: {1: 0},
    2: {1: 0, 2: 1},
    3: {1: 0, 2: 0, 3: 2},
    4: {1: 0, 2: 0, 3: 3, 4: 7},
    5: {1: 0, 2: 0, 3: 2, 4: 10, 5: 14},
    6: {1: 0, 2: 0, 3: 3, 4: 9, 5: 20, 6: 38},
    7: {1: 0, 2: 0, 3: 0, 4: 8, 5: 20, 6: 40, 7: 76},
}


def code_sum(weight_distribution, mu: int | None = None) -> int:
    """sum over i > (mu+1)/2 of (2i - 1 - mu) A_i."""
    a = list(weight_distribution)
    mu = len(a) - 1 if mu is None else mu
    return sum((2 * i - 1 - mu) * a[i] for i in range(len(a)) if 2 * i > mu + 1)


def code_sum_bound(mu: int, k: int) -> tuple[int, Fraction]:
    """Table value for projective codes and gamma = value / 2^k."""
    if not 1 <= k <= mu <= 7:
        raise RRPError(f"no table entry for mu={mu}, k={k}")
    if mu > (1 << k) - 1:
        raise RRPError(f"no projective [{mu},{k}] code exists")
    b = CODE_SUM_TABLE[mu][k]
    return b, Fraction(b, 1 << k)


def max_code_sum(mu: int, k: int) -> int:
    """Maximum code sum over all projective [mu, k] codes, by search.

    Every such code has k independent columns, so after a change of basis
    the columns contain the unit vectors; the remaining mu - k columns are
    chosen among the other nonzero vectors."""
    if mu > (1 << k) - 1 or k > mu:
        raise RRPError(f"no projective [{mu},{k}] code exists")
    units = [1 << i for i in range(k)]
    others = [v for v in range(1, 1 << k) if v & (v - 1)]
    best = None
    for extra in combinations(others, mu - k):
        cols = units + list(extra)
        dist = [0] * (mu + 1)
        for msg in range(1 << k):
            dist[sum((msg & c).bit_count() & 1 for c in cols)] += 1
        s = code_sum(dist, mu)
        best = s if best is None else max(best, s)
    return best


def upper_bound_from_code(n: int, code: AssociatedCode | None = None,
                          mu: int | None = None, k: int | None = None) -> int:
    """N_1 <= 2^(n-3-k) * code_sum + 2^(n-3) - 1."""
    m = (1 << (n - 3)) - 1
    if code is not None:
        if code.empty:
            return m
        return (1 << (n - 3 - code.k)) * code_sum(code.weight_distribution, code.mu) + m
    if not mu:
        return m
    b, _ = code_sum_bound(mu, k)
    return (1 << (n - 3 - k)) * b + m


def gain_ceiling(n: int, max_mu: int = 7) -> Fraction:
    """Strict ceiling (1 + max gamma) 2^(n-3) over all projective [mu, k], mu <= max_mu.

    N_1 <= 2^(n-3) gamma + 2^(n-3) - 1 is strictly below this value."""
    g = max(
        code_sum_bound(mu, k)[1]
        for mu in range(1, max_mu + 1)
        for k in range(1, mu + 1)
        if mu <= (1 << k) - 1
    )
    return (1 + g) * (1 << (n - 3))


@dataclass(frozen=True)
class ReferenceBounds:
    v: int
    lmrd_threshold: Fraction
    partial_spread_upper: int
    lmrd_code_bound: int
    main_lower: Fraction | None
    thm_gain_lower: int | None

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "lmrd_threshold": float(self.lmrd_threshold),
            "upper_bound": self.partial_spread_upper,
            "lmrd_code_bound": self.lmrd_code_bound,
            "main_lower": None if self.main_lower is None else float(self.main_lower),
            "net_gain_lower": self.thm_gain_lower,
        }


def reference_bounds(v: int) -> ReferenceBounds:
    if v < 6:
        raise RRPError("v must be at least 6")
    n = v - 3
    lmrd = Fraction((1 << (n - 1)) - 1, 3)
    if v % 2:
        ub = ((1 << v) - 1) * ((1 << (v - 1)) - 1) // 21
    else:
        ub = ((1 << v) - 1) * ((1 << (v - 1)) - 5) // 21
    gauss = gaussian_binomial(n, 2)
    main = None
    if v % 8 == 7:
        main = (1 << (2 * n)) + Fraction(9, 8) * gauss
    elif v % 8 == 3 and v >= 11:
        main = (1 << (2 * n)) + Fraction(81, 64) * gauss
    gain = None
    if n % 8 == 4:
        gain = 3 << (n - 4)
    elif n % 8 == 0:
        gain = 54 << (n - 8)
    return ReferenceBounds(v, lmrd, ub, (1 << (2 * n)) + gauss, main, gain)
