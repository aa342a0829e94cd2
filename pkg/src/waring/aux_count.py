"""Exact representation-function and solution-count machinery.

All counts are exact integers.  gamma tables are built by convolving
per-domain k-th power tables with a balanced (meet-in-the-middle) split, so
memory stays at the number of distinct sums; the predicted cost of a build
is the product of the domain sizes and is checked against a budget first.

brute_force_s_count and brute_force_t_pq enumerate tuples directly; they are
the independent reference route and share no code with the fast path.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import product

from . import smooth_sets
from .errors import BudgetError, CoprimalityError, DomainError

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class RepFunction:
    """gamma(m): multiplicity of each attainable sum of k-th powers."""

    k: int
    s: int
    domains: tuple[tuple[int, ...], ...]
    table: dict
    total: int


@dataclass(frozen=True)
class CountResult:
    S: int
    s: int
    k: int
    set_size: int
    diagonal_lb: int
    P_param: float


@dataclass(frozen=True)
class DistinctSums:
    distinct: int
    lower_bound: float
    total: int
    sum_gamma_sq: int


@dataclass(frozen=True)
class ExponentFit:
    points: tuple[tuple[float, int], ...]
    slope: float
    intercept: float


@dataclass(frozen=True)
class Lemma1Report:
    lhs: int
    rhs: int
    ratio: float
    Z: int
    inner_size: int
    outer_size: int
    P: float
    theta: float
    base_levels: int


def _normalize_domains(domains) -> tuple[tuple[int, ...], ...]:
    out = []
    for X in domains:
        xs = tuple(sorted(set(int(x) for x in X)))
        if not xs:
            raise DomainError("every domain must be nonempty")
        out.append(xs)
    return tuple(out)


def _check_budget(cost: int, budget: int, what: str) -> None:
    if cost > budget:
        raise BudgetError(f"{what}: predicted cost {cost} exceeds budget {budget}",
                          predicted=cost, budget=budget)


def _convolve(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for va, ca in a.items():
        for vb, cb in b.items():
            out[va + vb] += ca * cb
    return out


def rep_function(domains, k: int, budget_ops: int = DEFAULT_BUDGET) -> RepFunction:
    """Exact gamma table for sums x_1^k + ... + x_s^k over the given domains."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    doms = _normalize_domains(domains)
    cost = math.prod(len(X) for X in doms)
    _check_budget(cost, budget_ops, "rep_function")
    tables = [Counter(x**k for x in X) for X in doms]

    def build(lo: int, hi: int) -> Counter:
        if hi - lo == 1:
            return tables[lo]
        mid = (lo + hi + 1) // 2  # left block takes ceil(s/2) domains
        return _convolve(build(lo, mid), build(mid, hi))

    table = build(0, len(doms))
    total = math.prod(len(X) for X in doms)
    assert sum(table.values()) == total
    return RepFunction(k=k, s=len(doms), domains=doms, table=dict(table),
                       total=total)


def s_count(X, s: int, k: int, budget_ops: int = DEFAULT_BUDGET) -> CountResult:
    """Number of solutions of x_1^k+..+x_s^k = y_1^k+..+y_s^k over X^{2s}."""
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    rep = rep_function([X] * s, k, budget_ops=budget_ops)
    S = sum(c * c for c in rep.table.values())
    n = len(rep.domains[0])
    return CountResult(S=S, s=s, k=k, set_size=n, diagonal_lb=n**s,
                       P_param=float(max(rep.domains[0])))


def distinct_sums_bound(domains, k: int,
                        budget_ops: int = DEFAULT_BUDGET) -> DistinctSums:
    """Distinct attainable sums vs. the Cauchy-Schwarz floor total^2 / sum(gamma^2)."""
    rep = rep_function(domains, k, budget_ops=budget_ops)
    ssq = sum(c * c for c in rep.table.values())
    distinct = len(rep.table)
    # exact integer comparison before any float is formed
    assert distinct * ssq >= rep.total**2
    return DistinctSums(distinct=distinct, lower_bound=rep.total**2 / ssq,
                        total=rep.total, sum_gamma_sq=ssq)


def t_pq_count(E, s: int, k: int, p: int, q: int,
               budget_ops: int = DEFAULT_BUDGET) -> CountResult:
    """Solutions of p^k(sum x_i^k - sum y_i^k) = q^k(y^k - x^k) over E^{2s}.

    The two sides are tabulated separately (differences of (s-1)-fold sums
    against single-power differences) and matched through a dictionary, so
    the cost is |E|^(2s-2) + |E|^2 rather than |E|^(2s).
    """
    E = tuple(sorted(set(int(x) for x in E)))
    if not E:
        raise DomainError("E must be nonempty")
    if s < 2:
        raise DomainError(f"s must be >= 2, got {s}")
    for name, v in (("p", p), ("q", q)):
        if v < 2 or any(v % d == 0 for d in range(2, math.isqrt(v) + 1)):
            raise DomainError(f"{name}={v} is not prime")
    if p == q:
        raise DomainError("p and q must be distinct")
    for x in E:
        if x % p == 0:
            raise CoprimalityError(f"element {x} is not coprime to p={p}")
    _check_budget(len(E) ** (2 * s), budget_ops, "t_pq_count")

    rep = rep_function([E] * (s - 1), k, budget_ops=budget_ops)
    pk, qk = p**k, q**k
    left: Counter = Counter()
    for a, ca in rep.table.items():
        for b, cb in rep.table.items():
            left[pk * (a - b)] += ca * cb
    right: Counter = Counter()
    for x in E:
        for y in E:
            right[qk * (y**k - x**k)] += 1
    count = sum(c * right[v] for v, c in left.items() if v in right)
    return CountResult(S=count, s=s, k=k, set_size=len(E),
                       diagonal_lb=len(E) ** s, P_param=float(max(E)))


def brute_force_s_count(X, s: int, k: int) -> int:
    """Reference enumeration over all 2s-tuples; independent of the fast path."""
    X = sorted(set(X))
    hits = 0
    sums = Counter(sum(t) for t in product([x**k for x in X], repeat=s))
    for c in sums.values():
        hits += c * c
    return hits


def brute_force_t_pq(E, s: int, k: int, p: int, q: int) -> int:
    """Reference enumeration of the auxiliary congruence equation count."""
    E = sorted(set(E))
    pk, qk = p**k, q**k
    count = 0
    for xs in product(E, repeat=s - 1):
        lx = sum(v**k for v in xs)
        for ys in product(E, repeat=s - 1):
            ly = sum(v**k for v in ys)
            for x in E:
                for y in E:
                    if pk * (lx - ly) == qk * (y**k - x**k):
                        count += 1
    return count


def lemma1_sides(inner_elements, window: smooth_sets.PrimeWindow, s: int,
                 k: int, P: float,
                 budget_ops: int = DEFAULT_BUDGET) -> Lemma1Report:
    """Both sides of the one-level count estimate, from explicit pieces."""
    inner = tuple(sorted(set(inner_elements)))
    outer = smooth_sets.build_single(inner, window)
    Z = window.Z
    lhs = s_count(outer.elements, s, k, budget_ops=budget_ops).S
    rhs = (Z**s * s_count(inner, s, k, budget_ops=budget_ops).S
           + Z ** (2 * s) * math.floor(P)
           * s_count(inner, s - 1, k, budget_ops=budget_ops).S)
    return Lemma1Report(lhs=lhs, rhs=rhs, ratio=lhs / rhs, Z=Z,
                        inner_size=len(inner), outer_size=len(outer.elements),
                        P=float(P), theta=math.nan, base_levels=-1)


def lemma1_check(k: int, s: int, P: float, theta: float, base_levels: int = 0,
                 budget_ops: int = DEFAULT_BUDGET) -> Lemma1Report:
    """Compare the exact count over one product level against its estimate.

    Builds the inner set at parameter P (base_levels product layers over an
    interval base), multiplies by the window [P^theta/2, P^theta] to get the
    outer set, and reports lhs = S_s(outer) against
    rhs = Z^s S_s(inner) + Z^(2s) floor(P) S_{s-1}(inner).
    """
    inner = smooth_sets.build_single_levels(k, P, theta, base_levels)
    window = smooth_sets.window_for_size(P**theta)
    if not window.primes:
        raise DomainError(
            f"no primes in the top window [{window.lo}, {window.hi}]")
    report = lemma1_sides(inner.elements, window, s, k, P,
                          budget_ops=budget_ops)
    return Lemma1Report(lhs=report.lhs, rhs=report.rhs, ratio=report.ratio,
                        Z=report.Z, inner_size=report.inner_size,
                        outer_size=report.outer_size, P=float(P), theta=theta,
                        base_levels=base_levels)


def exponent_fit(runs) -> ExponentFit:
    """Least-squares slope of log S against log P."""
    pts = [(float(P), int(S)) for P, S in runs]
    if len(pts) < 3:
        raise DomainError(f"need at least 3 points, got {len(pts)}")
    if len({P for P, _ in pts}) != len(pts):
        raise DomainError("P values must be distinct")
    xs = [math.log(P) for P, _ in pts]
    ys = [math.log(S) for _, S in pts]
    n = len(pts)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return ExponentFit(points=tuple(pts), slope=slope,
                       intercept=my - slope * mx)
