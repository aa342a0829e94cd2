"""Integer-polynomial difference operators and the balancing algebra.

forward_diff(phi, t) is phi(x+t) - phi(x).  modified_diff steps by h*m and
divides the result by m; every coefficient stays an exact integer because
each term of phi(x+hm) - phi(x) carries at least one factor hm.  Chaining
modified differences with moduli p_j^k against x^k yields the polynomials
psi_i of degree k - i with leading coefficient k(k-1)...(k-i+1) * h_1...h_i.

lemma7_terms evaluates the two competing terms U_i, V_i of the nested-sum
estimate in log space; with power-law model counts and a balanced
construction-exponent schedule the two agree to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .errors import BudgetError, DivisibilityError, DomainError
from .phases import unit_sum

F_I_SUM_BUDGET = 10**8


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, coefficients ascending, no trailing zeros."""

    coeffs: tuple[int, ...]

    @staticmethod
    def make(coeffs) -> "IntPolynomial":
        cs = list(int(c) for c in coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return IntPolynomial(tuple(cs))

    @staticmethod
    def x_power(k: int) -> "IntPolynomial":
        return IntPolynomial((0,) * k + (1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, t: int) -> "IntPolynomial":
        """phi(x + t), expanded exactly."""
        out = [0] * len(self.coeffs)
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = 1  # binomial(j, i) * t^(j - i), built from i = j downward
            for i in range(j, -1, -1):
                out[i] += c * term
                if i:
                    term = term * t * i // (j - i + 1)
        return IntPolynomial.make(out)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return IntPolynomial.make(x - y for x, y in zip(a, b))

    def divide_exact(self, m: int) -> "IntPolynomial":
        out = []
        for c in self.coeffs:
            q, r = divmod(c, m)
            if r:
                raise DivisibilityError(
                    f"coefficient {c} not divisible by {m}")
            out.append(q)
        return IntPolynomial.make(out)

    def serialize(self) -> str:
        """Space-separated coefficient list 'c0 c1 ... cd'."""
        return " ".join(str(c) for c in self.coeffs)

    @staticmethod
    def parse(text: str) -> "IntPolynomial":
        return IntPolynomial.make(int(t) for t in text.split())


def forward_diff(phi: IntPolynomial, t: int) -> IntPolynomial:
    """phi(x + t) - phi(x)."""
    return phi.shift(t) - phi


def modified_diff(phi: IntPolynomial, h: int, m: int) -> IntPolynomial:
    """(phi(x + h*m) - phi(x)) / m, exact by construction."""
    if m < 1 or h < 1:
        raise DomainError(f"need h >= 1 and m >= 1, got h={h}, m={m}")
    return forward_diff(phi, h * m).divide_exact(m)


@dataclass(frozen=True)
class DiffChain:
    """i-fold modified difference of x^k with moduli p_j^k."""

    k: int
    h: tuple[int, ...]
    p: tuple[int, ...]
    moduli: tuple[int, ...]
    result: IntPolynomial


def psi(k: int, h, p) -> DiffChain:
    """Chain modified differences with steps h_j and moduli p_j^k over x^k."""
    h = tuple(int(v) for v in h)
    p = tuple(int(v) for v in p)
    if len(h) != len(p):
        raise DomainError(f"|h|={len(h)} and |p|={len(p)} must match")
    i = len(h)
    if k < 1 or i > k:
        raise DomainError(f"need 0 <= i <= k, got i={i}, k={k}")
    for v in h:
        if v < 1:
            raise DomainError(f"step h={v} must be positive")
    for v in p:
        if not _is_prime(v):
            raise DomainError(f"{v} is not prime")
    moduli = tuple(v**k for v in p)
    poly = IntPolynomial.x_power(k)
    for hj, mj in zip(h, moduli):
        poly = modified_diff(poly, hj, mj)
    expected_lead = math.prod(range(k - i + 1, k + 1)) * math.prod(h)
    assert poly.degree == k - i and poly.leading == expected_lead
    return DiffChain(k=k, h=h, p=p, moduli=moduli, result=poly)


def f_i_sum(alpha: float, q: int, k: int, H, windows, x_range: int,
            budget: int = F_I_SUM_BUDGET) -> complex:
    """Nested sum of e(q^k * psi_i(x; h; p^k) * alpha) over all ranges.

    H is the list of step bounds H_1..H_i, windows the per-level prime lists,
    x ranges over [1, x_range].  Exact phase reduction keeps the result
    deterministic; the term count is checked against the budget first.
    """
    H = [int(v) for v in H]
    wins = [tuple(int(p) for p in w) for w in windows]
    if len(H) != len(wins):
        raise DomainError("H and windows must have equal length")
    if not H:
        raise DomainError("need at least one difference level")
    if x_range < 1 or any(b < 1 for b in H) or any(not w for w in wins):
        raise DomainError("all ranges must be nonempty")
    terms = math.prod(H) * math.prod(len(w) for w in wins) * x_range
    if terms > budget:
        raise BudgetError(f"{terms} terms exceed budget {budget}",
                          predicted=terms, budget=budget)
    qk = q**k
    total = 0j
    for hs in product(*(range(1, b + 1) for b in H)):
        for ps in product(*wins):
            poly = psi(k, hs, ps).result
            freqs = [qk * poly.evaluate(x) for x in range(1, x_range + 1)]
            total += unit_sum(freqs, alpha)
    return total


# ---------------------------------------------------------------------------
# Balancing algebra for the multi-level construction.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BalanceGeometry:
    """Level sizes of a multi-level construction: Z_j = P^theta_j, H_j = P/Z_j^k."""

    k: int
    P: float
    thetas: tuple[float, ...]     # theta_1..theta_k
    Z: tuple[float, ...]          # Z_1..Z_k
    H: tuple[float, ...]          # H_1..H_k
    P_levels: tuple[float, ...]   # P_0..P_k

    @staticmethod
    def from_thetas(k: int, P: float, thetas) -> "BalanceGeometry":
        thetas = tuple(float(t) for t in thetas)
        if len(thetas) != k:
            raise DomainError(f"need {k} construction exponents, got {len(thetas)}")
        Z = tuple(P**t for t in thetas)
        H = tuple(P / z**k for z in Z)
        levels = [float(P)]
        for z in Z:
            levels.append(levels[-1] / z)
        return BalanceGeometry(k=k, P=float(P), thetas=thetas, Z=Z, H=H,
                               P_levels=tuple(levels))


@dataclass(frozen=True)
class BalanceCounts:
    """log S_{s-1}(P_i) for levels i = 0..k, plus where they came from."""

    s: int
    log_S: tuple[float, ...]
    source: str  # "model" or "measured"


def model_counts(geometry: BalanceGeometry, s: int, delta_prev: float) -> BalanceCounts:
    """Power-law counts S_{s-1}(P_i) = P_i^lam with lam = delta_prev + 2(s-1) - k."""
    lam = delta_prev + 2 * (s - 1) - geometry.k
    return BalanceCounts(
        s=s,
        log_S=tuple(lam * math.log(p) for p in geometry.P_levels),
        source="model",
    )


def measured_counts(s: int, S_values) -> BalanceCounts:
    """Counts taken from exact solution-count runs, one per level 0..k."""
    return BalanceCounts(s=s, log_S=tuple(math.log(v) for v in S_values),
                         source="measured")


@dataclass(frozen=True)
class Lemma7Terms:
    i: int
    U: float
    V: float
    residual: float   # |log(U/V)|
    inputs: dict


def _log_u(i: int, c: BalanceCounts, g: BalanceGeometry,
           log_ht: list[float], log_zt: list[float]) -> float:
    s = c.s
    logP = math.log(g.P)
    log_z_next = math.log(g.Z[i])  # Z_{i+1} (zero-based storage)
    return (0.5 * c.log_S[i]
            + (2 * s - 3) / 2 * log_z_next
            + 0.5 * (logP + 2 * (log_ht[i] + log_zt[i]) + log_z_next
                     + c.log_S[i + 1]))


def lemma7_terms(i: int, counts: BalanceCounts,
                 geometry: BalanceGeometry) -> Lemma7Terms:
    """U_i and V_i of the nested-sum estimate, with the chained J substitute.

    V_i uses J_{i+1} ~ U_{i+1} for i+1 < k and the closing value
    J_k = Htilde_k * Ztilde_k * P * S_{s-1}(P_k) at the last level, so that
    U_{k-1} = V_{k-1} collapses to the unit-step condition H_k = 1.
    The residual |log(U_i/V_i)| is the balancing-quality metric: it vanishes
    exactly when the exponent schedule solves the balance equations.
    """
    k = geometry.k
    if not 0 <= i <= k - 1:
        raise DomainError(f"need 0 <= i <= k-1, got i={i}")
    if len(counts.log_S) != k + 1:
        raise DomainError("counts must cover levels 0..k")
    s = counts.s
    logP = math.log(geometry.P)
    # cumulative log Htilde_i, log Ztilde_i for i = 0..k
    log_ht = [0.0]
    log_zt = [0.0]
    for hj, zj in zip(geometry.H, geometry.Z):
        log_ht.append(log_ht[-1] + math.log(hj))
        log_zt.append(log_zt[-1] + math.log(zj))

    log_u_i = _log_u(i, counts, geometry, log_ht, log_zt)
    if i + 1 < k:
        log_j_next = _log_u(i + 1, counts, geometry, log_ht, log_zt)
    else:
        log_j_next = log_ht[k] + log_zt[k] + logP + counts.log_S[k]
    log_z_next = math.log(geometry.Z[i])
    log_v_i = (0.5 * counts.log_S[i]
               + (2 * s - 3) / 2 * log_z_next
               + 0.5 * (log_ht[i] + log_zt[i] + log_j_next))
    residual = abs(log_u_i - log_v_i)
    return Lemma7Terms(
        i=i,
        U=math.exp(log_u_i),
        V=math.exp(log_v_i),
        residual=residual,
        inputs={
            "S_prev_i": math.exp(counts.log_S[i]),
            "S_prev_next": math.exp(counts.log_S[i + 1]),
            "Z_next": geometry.Z[i],
            "Htilde_i": math.exp(log_ht[i]),
            "Ztilde_i": math.exp(log_zt[i]),
            "P": geometry.P,
            "source": counts.source,
        },
    )
