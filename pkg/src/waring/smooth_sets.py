"""Product-set constructions over prime windows, and their diagnostics.

The single-exponent construction multiplies a base set by the primes of one
window [Z/2, Z] per level; the multi-level construction uses a per-level
exponent schedule and keeps only coprime products (p, x) = 1.  The base of
the recursion is a full integer interval; its size is recorded in the spec
because every downstream count depends on it.

Elements are kept within 64 bits with checked arithmetic: a product that
would exceed the width raises instead of wrapping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .errors import DomainError, EmptyWindowError, WidthOverflowError

SIEVE_LIMIT = 10**9
WIDTH_LIMIT = 2**63 - 1
_SEGMENT = 1 << 20


@dataclass(frozen=True)
class PrimeWindow:
    lo: int
    hi: int
    primes: tuple[int, ...]

    @property
    def Z(self) -> int:
        return len(self.primes)


def primes_in(lo: int, hi: int) -> PrimeWindow:
    """Exact primes in [lo, hi] by a chunked segmented sieve."""
    if hi < lo:
        raise DomainError(f"empty range: hi={hi} < lo={lo}")
    if lo < 2:
        raise DomainError(f"lo must be >= 2, got {lo}")
    if hi > SIEVE_LIMIT:
        raise DomainError(f"hi={hi} exceeds sieve limit {SIEVE_LIMIT}")
    root = math.isqrt(hi)
    base = bytearray([1]) * (root + 1)
    base[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = b"\x00" * len(base[p * p :: p])
    small = [p for p in range(2, root + 1) if base[p]]
    out: list[int] = []
    start = lo
    while start <= hi:
        stop = min(start + _SEGMENT - 1, hi)
        seg = bytearray([1]) * (stop - start + 1)
        for p in small:
            first = max(p * p, (start + p - 1) // p * p)
            for m in range(first, stop + 1, p):
                seg[m - start] = 0
        out.extend(n for n in range(start, stop + 1) if seg[n - start] and n >= 2)
        start = stop + 1
    return PrimeWindow(lo=lo, hi=hi, primes=tuple(out))


def window_for_size(size: float) -> PrimeWindow:
    """Primes in the inclusive integer window [ceil(size/2), floor(size)]."""
    hi = math.floor(size)
    lo = max(2, math.ceil(size / 2))
    if hi < lo:
        return PrimeWindow(lo=lo, hi=hi, primes=())
    return primes_in(lo, hi)


@dataclass(frozen=True)
class SmoothSpec:
    k: int
    mode: str                      # "single" | "multi" | "imported"
    P_top: float
    theta: float | None = None
    levels: int = 0
    thetas: tuple[float, ...] | None = None
    base_floor: int = 1
    theta_at_limit: bool = False


@dataclass(frozen=True)
class SmoothSet:
    spec: SmoothSpec | None
    level: int
    elements: tuple[int, ...]
    windows: tuple[PrimeWindow, ...]   # in application order, base outward
    collision_count: int

    def __len__(self) -> int:
        return len(self.elements)


def _checked_products(base, primes, coprime: bool) -> tuple[tuple[int, ...], int]:
    seen = set()
    attempts = 0
    for x in base:
        for p in primes:
            if coprime and x % p == 0:
                continue
            attempts += 1
            prod = x * p
            if prod > WIDTH_LIMIT:
                raise WidthOverflowError(
                    f"product {x} * {p} exceeds the 64-bit element contract")
            seen.add(prod)
    return tuple(sorted(seen)), attempts - len(seen)


def build_single(base, window: PrimeWindow,
                 spec: SmoothSpec | None = None, level: int = 0) -> SmoothSet:
    """One product layer {x * p : x in base, p in window}, deduplicated."""
    base = tuple(base)
    if not base:
        raise DomainError("base set must be nonempty")
    if list(base) != sorted(set(base)):
        raise DomainError("base must be sorted and duplicate-free")
    # every pair is attempted, so lost products = |base|*Z - |elements|
    elements, collisions = _checked_products(base, window.primes, coprime=False)
    return SmoothSet(spec=spec, level=level, elements=elements,
                     windows=(window,), collision_count=collisions)


def build_single_levels(k: int, P: float, theta: float, levels: int) -> SmoothSet:
    """Recursive single-exponent construction with an interval base.

    Level parameters shrink by P -> P^(1/(1+theta)); the window for each
    layer holds the primes in [P_inner^theta / 2, P_inner^theta].  The base
    is {1..base_floor} with base_floor = floor(P / prod(window midpoints)),
    clamped to at least 1.  levels=0 returns the bare interval [1..floor(P)].
    """
    if k < 3:
        raise DomainError(f"k must be >= 3, got {k}")
    if levels < 0:
        raise DomainError(f"levels must be >= 0, got {levels}")
    if not 0.0 < theta <= 1.0:
        raise DomainError(f"theta must lie in (0, 1], got {theta}")
    at_limit = theta <= 1.0 / k
    if at_limit:
        warnings.warn(f"theta={theta} is at or below 1/k for k={k}; "
                      "the construction is only the limiting case",
                      stacklevel=2)
    params = [float(P)]
    for _ in range(levels):
        params.append(params[-1] ** (1.0 / (1.0 + theta)))
    wins = []
    for j in range(levels):
        w = window_for_size(params[j + 1] ** theta)
        if not w.primes:
            raise EmptyWindowError(
                f"level {j}: no primes in [{w.lo}, {w.hi}] "
                f"(inner parameter {params[j + 1]:.4g})", level=j)
        wins.append(w)
    midprod = math.prod(0.75 * params[j + 1] ** theta for j in range(levels))
    base_floor = max(1, math.floor(P / midprod))
    spec = SmoothSpec(k=k, mode="single", P_top=float(P), theta=theta,
                      levels=levels, base_floor=base_floor,
                      theta_at_limit=at_limit)
    elements: tuple[int, ...] = tuple(range(1, base_floor + 1))
    collisions = 0
    applied: tuple[PrimeWindow, ...] = ()
    for j in reversed(range(levels)):
        elements, lost = _checked_products(elements, wins[j].primes,
                                           coprime=False)
        collisions += lost
        applied = applied + (wins[j],)
    return SmoothSet(spec=spec, level=0, elements=elements,
                     windows=applied, collision_count=collisions)


def multilevel_spec(k: int, thetas) -> SmoothSpec:
    """Spec for the multi-level construction from a schedule of exponents."""
    ths = tuple(float(t) for t in getattr(thetas, "thetas", thetas))
    if len(ths) != k:
        raise DomainError(f"need {k} exponents, got {len(ths)}")
    return SmoothSpec(k=k, mode="multi", P_top=0.0, thetas=ths)


def build_multilevel(spec: SmoothSpec, P: float) -> list[SmoothSet]:
    """All levels of the coprime product construction, level k down to 0.

    Level sizes follow Z_i = P^theta_i and P_{i+1} = P_i / Z_{i+1}; level k
    is the full interval [1, floor(P_k)], and level i multiplies level i+1
    by the primes of window i+1 subject to (p, x) = 1.
    """
    if spec.mode != "multi" or spec.thetas is None:
        raise DomainError("spec must be a multi-mode spec with a schedule")
    k = spec.k
    Z = [P**t for t in spec.thetas]
    P_levels = [float(P)]
    for z in Z:
        P_levels.append(P_levels[-1] / z)
    wins = []
    for i, z in enumerate(Z):
        w = window_for_size(z)
        if not w.primes:
            raise EmptyWindowError(
                f"level {i + 1}: no primes in [{w.lo}, {w.hi}] "
                f"(Z_{i + 1} = {z:.4g})", level=i + 1)
        wins.append(w)
    base_floor = max(1, math.floor(P_levels[k]))
    filled = replace(spec, P_top=float(P), base_floor=base_floor)
    current = tuple(range(1, base_floor + 1))
    applied: tuple[PrimeWindow, ...] = ()
    sets = [SmoothSet(spec=filled, level=k, elements=current,
                      windows=(), collision_count=0)]
    total_collisions = 0
    for i in reversed(range(k)):  # level i from level i+1 via window i+1
        elements, lost = _checked_products(current, wins[i].primes, coprime=True)
        total_collisions += lost
        applied = applied + (wins[i],)
        sets.append(SmoothSet(spec=filled, level=i, elements=elements,
                              windows=applied, collision_count=total_collisions))
        current = elements
    return sets


@dataclass(frozen=True)
class ResidueProfile:
    q: int
    counts: dict
    phi_q: int
    max_deviation: float


def residue_profile(elements, q: int) -> ResidueProfile:
    """Exact counts of elements per residue class coprime to q."""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    elems = getattr(elements, "elements", elements)
    coprime = [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
    counts = {a: 0 for a in coprime}
    for x in elems:
        r = x % q
        if r in counts:
            counts[r] += 1
    n = len(elems)
    phi_q = len(coprime)
    if n == 0:
        raise DomainError("empty element set")
    max_dev = max(abs(counts[a] * phi_q / n - 1.0) for a in coprime)
    return ResidueProfile(q=q, counts=counts, phi_q=phi_q,
                          max_deviation=max_dev)


_LOGLOG_FLOOR = math.exp(math.e)  # below this, log log P is not >= 1


def size_estimate(k: int, P: float) -> float:
    """Heuristic size P/(log P)^((eta+1)/2) * ((k+1)/2)^eta, eta = k log log P.

    Report-only: the value can exceed P for small P and is compared against
    built sets side by side, never asserted.
    """
    if P < _LOGLOG_FLOOR:
        raise DomainError(f"P must be >= e^e ~ {_LOGLOG_FLOOR:.3f}, got {P}")
    eta = k * math.log(math.log(P))
    log_val = (math.log(P)
               - (eta + 1) / 2 * math.log(math.log(P))
               + eta * math.log((k + 1) / 2))
    try:
        return math.exp(log_val)
    except OverflowError:
        return math.inf


def write_set(path, smooth: SmoothSet) -> None:
    """Newline-delimited decimal export with a header line."""
    spec = smooth.spec
    k = spec.k if spec else 0
    mode = spec.mode if spec else "raw"
    p_top = spec.P_top if spec else 0.0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# waring-set k={k} mode={mode} P={p_top!r}\n")
        for x in smooth.elements:
            fh.write(f"{x}\n")


def read_set(path) -> SmoothSet:
    """Inverse of write_set; exact round-trip of header fields and elements."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("# waring-set "):
            raise DomainError(f"not a set file: header {header!r}")
        fields = dict(part.split("=", 1) for part in header[13:].split())
        elements = tuple(int(line) for line in fh if line.strip())
    spec = SmoothSpec(k=int(fields["k"]), mode=fields["mode"],
                      P_top=float(fields["P"]))
    return SmoothSet(spec=spec, level=0, elements=elements, windows=(),
                     collision_count=0)
