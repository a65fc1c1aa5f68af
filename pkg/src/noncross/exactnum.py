"""Exact rationals, certified square-root enclosures and radical-sum comparison.

Every length comparison in the package goes through here. Lengths are sums of
square roots of rationals; they are evaluated as dyadic enclosures at a given
number of fractional bits and compared with precision doubling.  Equality is
never inferred from numbers, only from the squarefree-kernel canonical form.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rat = Fraction

DEFAULT_START_BITS = 64
DEFAULT_PRECISION_CAP = 16384
TRIAL_DIVISION_LIMIT = 10**6


class Cmp(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    UNRESOLVED = "unresolved"

    def flipped(self) -> "Cmp":
        if self is Cmp.LESS:
            return Cmp.GREATER
        if self is Cmp.GREATER:
            return Cmp.LESS
        return self


def precision_cap() -> int:
    """Escalation cap in bits; ``NONCROSS_PRECISION_CAP`` overrides the default."""
    raw = os.environ.get("NONCROSS_PRECISION_CAP")
    if raw:
        return max(DEFAULT_START_BITS, int(raw))
    return DEFAULT_PRECISION_CAP


# -- Rat helpers -------------------------------------------------------------

def rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(value)


def parse_rat(text: str) -> Fraction:
    """Parse ``"num/den"`` or an integer string; a unicode minus is tolerated."""
    s = text.strip().replace("−", "-")
    if not s:
        raise ValueError("empty rational")
    if "/" in s:
        num, den = s.split("/", 1)
        d = int(den)
        if d <= 0:
            raise ValueError(f"non-positive denominator in {text!r}")
        return Fraction(int(num), d)
    return Fraction(int(s))


def format_rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def sci(q: Fraction, digits: int = 6) -> str:
    """Scientific notation for rationals far outside the float range."""
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    exp = len(str(q.numerator)) - len(str(q.denominator))
    # bring mantissa into [1, 10)
    scaled = q * Fraction(10) ** (-exp)
    while scaled >= 10:
        scaled /= 10
        exp += 1
    while scaled < 1:
        scaled *= 10
        exp -= 1
    mant = scaled * 10 ** (digits - 1)
    m = (mant.numerator * 2 + mant.denominator) // (2 * mant.denominator)
    if m >= 10**digits:
        m //= 10
        exp += 1
    ds = str(m)
    body = ds[0] + ("." + ds[1:] if len(ds) > 1 else "")
    return f"{sign}{body}e{exp:+d}"


# -- Interval ----------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    precision_bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.precision_bits <= 0:
            raise ValueError("precision_bits must be positive")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi,
                        min(self.precision_bits, other.precision_bits))

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo,
                        min(self.precision_bits, other.precision_bits))

    def certainly_gt(self, other: "Interval") -> bool:
        return self.lo > other.hi

    def to_json(self) -> dict:
        return {
            "approx": sci(self.mid, 20),
            "error_bound": sci(self.width / 2 if self.width else Fraction(0), 3),
            "lo": format_rat(self.lo),
            "hi": format_rat(self.hi),
            "precision_bits": self.precision_bits,
        }


def point_interval(q: Fraction, precision_bits: int = DEFAULT_START_BITS) -> Interval:
    return Interval(q, q, precision_bits)


def floor_sqrt_scaled(q: Fraction, bits: int) -> tuple[int, bool]:
    """Return ``(floor(sqrt(q) * 2**bits), exact)`` for rational ``q >= 0``.

    ``floor(sqrt(floor(x))) == floor(sqrt(x))`` for real ``x >= 0``, so one
    integer square root of the truncated scaled radicand is exact.
    """
    num, den = q.numerator, q.denominator
    if num < 0:
        raise ValueError("square root of a negative rational")
    scaled_num = num << (2 * bits)
    t, rem = divmod(scaled_num, den)
    r = math.isqrt(t)
    return r, (rem == 0 and r * r == t)


def sqrt_interval(q, precision_bits: int) -> Interval:
    """Certified enclosure of ``sqrt(q)``.

    Width is at most ``2**-precision_bits * max(1, hi)``; perfect squares of
    dyadic-scaled rationals come back as point intervals.
    """
    q = rat(q)
    if q < 0:
        raise ValueError(f"sqrt_interval: negative radicand {q}")
    if precision_bits <= 0:
        raise ValueError("precision_bits must be positive")
    if q == 0:
        return Interval(Fraction(0), Fraction(0), precision_bits)
    # exact rational square roots first
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        root = Fraction(rn, rd)
        return Interval(root, root, precision_bits)
    r, exact = floor_sqrt_scaled(q, precision_bits)
    scale = 1 << precision_bits
    lo = Fraction(r, scale)
    hi = lo if exact else Fraction(r + 1, scale)
    return Interval(lo, hi, precision_bits)


def rat_lower_bound(v: Interval) -> Fraction:
    return v.lo


def rat_upper_bound(v: Interval) -> Fraction:
    return v.hi


def interval_div(num: Interval, den: Interval) -> Interval:
    """Enclosure of num/den for intervals with num >= 0 and den > 0."""
    if den.lo <= 0 or num.lo < 0:
        raise ValueError("interval_div needs num >= 0 and den > 0")
    return Interval(num.lo / den.hi, num.hi / den.lo,
                    min(num.precision_bits, den.precision_bits))


def truncate_down(q: Fraction, extra_bits: int = 48) -> Fraction:
    """Largest dyadic rational <= q keeping ~extra_bits significant bits."""
    if q <= 0:
        return q
    mag = q.numerator.bit_length() - q.denominator.bit_length()
    frac_bits = max(0, extra_bits - mag)
    return Fraction((q.numerator << frac_bits) // q.denominator, 1 << frac_bits)


# -- squarefree canonicalization ---------------------------------------------

@lru_cache(maxsize=1)
def _prime_tree() -> list[list[int]]:
    """Product tree over the primes below TRIAL_DIVISION_LIMIT (leaves first)."""
    limit = TRIAL_DIVISION_LIMIT
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    level = [i for i in range(limit + 1) if sieve[i]]
    tree = [level]
    while len(level) > 1:
        nxt = [level[i] * level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        tree.append(nxt)
        level = nxt
    return tree


def _small_prime_factors(n: int) -> list[int]:
    """Distinct primes <= TRIAL_DIVISION_LIMIT dividing n."""
    if n < 2:
        return []
    if n < (1 << 40):
        # plain trial division is cheaper than walking the product tree
        out = []
        m = n
        p = 2
        while p * p <= m and p <= TRIAL_DIVISION_LIMIT:
            if m % p == 0:
                out.append(p)
                while m % p == 0:
                    m //= p
            p += 1 if p == 2 else 2
        if 1 < m <= TRIAL_DIVISION_LIMIT:
            out.append(m)
        return out
    tree = _prime_tree()
    top = len(tree) - 1
    found: list[int] = []
    stack = [(top, 0)]
    g0 = math.gcd(n, tree[top][0])
    if g0 == 1:
        return []
    while stack:
        depth, idx = stack.pop()
        node = tree[depth][idx]
        if math.gcd(n, node) == 1:
            continue
        if depth == 0:
            found.append(node)
            continue
        child = 2 * idx
        below = tree[depth - 1]
        if child + 1 < len(below):
            stack.append((depth - 1, child + 1))
        stack.append((depth - 1, child))
    return sorted(found)


@lru_cache(maxsize=1 << 16)
def squarefree_split_int(n: int) -> tuple[int, int]:
    """``n = s*s*k``; ``k`` squarefree over primes up to the trial limit.

    A cofactor without small prime factors is folded into ``s`` when it is a
    perfect square and otherwise kept inside the kernel as is.
    """
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return (0 if n == 0 else 1), (1 if n else 0)
    s, k, m = 1, 1, n
    for p in _small_prime_factors(n):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            k *= p
    if m > 1:
        r = math.isqrt(m)
        if r * r == m:
            s *= r
        else:
            k *= m
    return s, k


def radical_kernel(r: Fraction) -> tuple[Fraction, int]:
    """``sqrt(r) == c * sqrt(k)`` with rational c >= 0 and integer kernel k."""
    r = rat(r)
    if r < 0:
        raise ValueError("negative radicand")
    if r == 0:
        return Fraction(0), 1
    s, k = squarefree_split_int(r.numerator * r.denominator)
    return Fraction(s, r.denominator), k


Term = tuple  # (coefficient: Rat >= 0, radicand: Rat >= 0)


def _merge_identical(terms: Iterable[Term]) -> dict:
    out: dict = {}
    for c, r in terms:
        c, r = rat(c), rat(r)
        if c < 0 or r < 0:
            raise ValueError("coefficients and radicands must be non-negative")
        if c == 0 or r == 0:
            continue
        out[r] = out.get(r, Fraction(0)) + c
    return out


def canonical_form(terms: Iterable[Term]) -> dict[int, Fraction]:
    """Map squarefree kernel -> total rational coefficient."""
    out: dict[int, Fraction] = {}
    for r, c in _merge_identical(terms).items():
        s, k = radical_kernel(r)
        out[k] = out.get(k, Fraction(0)) + c * s
    return {k: v for k, v in out.items() if v != 0}


def _cancel(a: dict, b: dict) -> tuple[list[Term], list[Term]]:
    left, right = [], []
    for key in set(a) | set(b):
        d = a.get(key, Fraction(0)) - b.get(key, Fraction(0))
        if d > 0:
            left.append((d, key))
        elif d < 0:
            right.append((-d, key))
    return left, right


def _sum_bounds(terms: Sequence[Term], bits: int) -> tuple[int, int]:
    """Integer bounds ``lo <= 2**bits * sum c*sqrt(r) <= hi``."""
    lo = hi = 0
    for c, r in terms:
        v, exact = floor_sqrt_scaled(Fraction(c) ** 2 * Fraction(r), bits)
        lo += v
        hi += v if exact else v + 1
    return lo, hi


def _numeric_compare(left, right, start: int, cap: int) -> Cmp:
    bits = start
    while True:
        llo, lhi = _sum_bounds(left, bits)
        rlo, rhi = _sum_bounds(right, bits)
        if llo > rhi:
            return Cmp.GREATER
        if lhi < rlo:
            return Cmp.LESS
        if bits >= cap:
            return Cmp.UNRESOLVED
        bits = min(cap, bits * 2)


def compare_radical_sums(a: Iterable[Term], b: Iterable[Term], cap: int | None = None,
                         start_bits: int = DEFAULT_START_BITS) -> Cmp:
    """Compare ``sum a_i*sqrt(r_i)`` with ``sum b_j*sqrt(s_j)``.

    Identical radicands are merged and cancelled first, then a cheap numeric
    pass runs; only when that fails are radicands reduced to squarefree
    kernels.  EQUAL is returned only for identical canonical forms.
    """
    cap = precision_cap() if cap is None else cap
    left, right = _cancel(_merge_identical(a), _merge_identical(b))
    if not left and not right:
        return Cmp.EQUAL
    quick = _numeric_compare(left, right, start_bits, start_bits)
    if quick is not Cmp.UNRESOLVED:
        return quick
    left, right = _cancel(canonical_form(left), canonical_form(right))
    if not left and not right:
        return Cmp.EQUAL
    return _numeric_compare(left, right, start_bits, max(cap, start_bits))
