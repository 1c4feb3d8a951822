"""Exact Wigner 6j symbols by the Racah single sum, and the Ponzano-Regge
asymptotic formula to compare them against.

Arguments are laid out on the tetrahedron's edge labels, so
(j1..j6) means {j1 j2 j3; j4 j5 j6} with triads (123), (156), (264), (345).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import geometry as geo

TRIADS = ((0, 1, 2), (0, 4, 5), (3, 1, 5), (3, 4, 2))


class CausticError(geo.GeometryError):
    """The classical tetrahedron is flat or missing; the oscillatory formula does not apply."""


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return math.factorial(n)


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, v in enumerate(sieve) if v)


def _legendre(n: int, p: int) -> int:
    e, q = 0, p
    while q <= n:
        e += n // q
        q *= p
    return e


@dataclass(frozen=True)
class ExactRational:
    """cofactor * sqrt(radicand), radicand a squarefree positive integer.

    Zero is stored as (0, 1). Two square roots of distinct squarefree
    integers are linearly independent over Q, so equality is structural.
    """

    cofactor: Fraction
    radicand: int = 1

    def __post_init__(self):
        if self.radicand < 1:
            raise ValueError("radicand must be positive")
        if self.cofactor == 0 and self.radicand != 1:
            object.__setattr__(self, "radicand", 1)

    @staticmethod
    def sqrt_of(q: Fraction) -> "ExactRational":
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return ExactRational(Fraction(0))
        # sqrt(p/q) = sqrt(p q) / q
        s, m = _split_square(q.numerator * q.denominator)
        return ExactRational(Fraction(s, q.denominator), m)

    @property
    def sign(self) -> int:
        return (self.cofactor > 0) - (self.cofactor < 0)

    def square(self) -> Fraction:
        return self.cofactor**2 * self.radicand

    def __mul__(self, other):
        if not isinstance(other, ExactRational):
            return ExactRational(self.cofactor * Fraction(other), self.radicand)
        g = math.gcd(self.radicand, other.radicand)
        return ExactRational(
            self.cofactor * other.cofactor * g, (self.radicand // g) * (other.radicand // g)
        )

    __rmul__ = __mul__

    def __neg__(self):
        return ExactRational(-self.cofactor, self.radicand)

    def __float__(self) -> float:
        if self.cofactor == 0:
            return 0.0
        m = self.radicand
        if m.bit_length() < 900:
            return float(self.cofactor) * math.sqrt(m)
        shift = m.bit_length()
        root = math.isqrt(m << (2 * shift))
        return float(self.cofactor * Fraction(root, 1 << shift))

    def __str__(self) -> str:
        c = self.cofactor
        frac = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return frac if self.radicand == 1 else f"sqrt({self.radicand})*{frac}"


def _split_square(n: int) -> tuple[int, int]:
    """n = s^2 * m with m squarefree (trial division; used on small n only)."""
    s, m, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        m *= p ** (e % 2)
        p += 1
    return s, m * n


def exact_sum(terms) -> dict[int, Fraction]:
    """Sum ExactRationals exactly, grouped by radicand; zero groups dropped."""
    out: dict[int, Fraction] = {}
    for t in terms:
        out[t.radicand] = out.get(t.radicand, Fraction(0)) + t.cofactor
    return {m: c for m, c in out.items() if c != 0}


def parse_half_integer(x) -> Fraction:
    """Accepts 3/2, "3/2", 1.5, "1.5"; rejects anything not a multiple of 1/2."""
    try:
        f = Fraction(str(x).strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {x!r}") from exc
    if f < 0 or (2 * f).denominator != 1:
        raise ValueError(f"{x!r} is not a nonnegative half-integer")
    return f


def _twice(args) -> tuple[int, ...]:
    vals = [parse_half_integer(a) for a in args]
    if len(vals) != 6:
        raise ValueError(f"a 6j symbol takes six arguments, got {len(vals)}")
    return tuple(int(2 * v) for v in vals)


def triads_ok(args) -> bool:
    d = _twice(args)
    return all(_triad_ok(d[a], d[b], d[c]) for a, b, c in TRIADS)


def _triad_ok(a: int, b: int, c: int) -> bool:
    return (a + b + c) % 2 == 0 and abs(a - b) <= c <= a + b


def exact_6j(args) -> ExactRational:
    """Racah's single sum, all in integers and Fractions."""
    d = _twice(args)
    if not all(_triad_ok(d[a], d[b], d[c]) for a, b, c in TRIADS):
        return ExactRational(Fraction(0))
    # with doubled arguments every needed combination is even
    tri = [(d[a], d[b], d[c]) for a, b, c in TRIADS]
    # Delta^2 = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!
    num_f, den_f = [], []
    for a, b, c in tri:
        num_f += [(a + b - c) // 2, (a - b + c) // 2, (-a + b + c) // 2]
        den_f.append((a + b + c) // 2 + 1)
    alpha = [(a + b + c) // 2 for a, b, c in tri]
    j1, j2, j3, j4, j5, j6 = d
    beta = [(j1 + j2 + j4 + j5) // 2, (j2 + j3 + j5 + j6) // 2, (j3 + j1 + j6 + j4) // 2]
    total = 0
    lo, hi = max(alpha), min(beta)
    terms = []
    for k in range(lo, hi + 1):
        den = 1
        for a in alpha:
            den *= _factorial(k - a)
        for b in beta:
            den *= _factorial(b - k)
        terms.append(((-1) ** k * _factorial(k + 1), den))
    for num, den in terms:
        total += Fraction(num, den)
    if total == 0:
        return ExactRational(Fraction(0))
    top = max(num_f + den_f)
    square, radicand = Fraction(1), 1
    for p in _primes_upto(top):
        e = sum(_legendre(n, p) for n in num_f) - sum(_legendre(n, p) for n in den_f)
        if e % 2:
            radicand *= p
            e -= 1
        square *= Fraction(p) ** (e // 2)
    return ExactRational(total * square, radicand)


def sixj_float(args) -> float:
    return float(exact_6j(args))


def pr_edges(args) -> np.ndarray:
    return np.array([float(parse_half_integer(a)) + 0.5 for a in args])


def pr_amplitude(args) -> float:
    J = pr_edges(args)
    _check_classical(J)
    return 1.0 / math.sqrt(12 * math.pi * abs(geo.embed(J).volume))


def _check_classical(J) -> None:
    cls = geo.classify(J)
    if cls is not geo.ExistenceClass.NONDEGENERATE:
        raise CausticError(
            f"edges j + 1/2 = {list(map(float, J))} give a {cls.name} tetrahedron; "
            "no oscillatory asymptotics there"
        )


def pr_asymptotic(args) -> float:
    """cos(S + pi/4) / sqrt(12 pi |V|) at J = j + 1/2, orientation V > 0."""
    J = pr_edges(args)
    _check_classical(J)
    emb = geo.embed(J)
    S = float(J @ geo.dihedral_angles(emb))
    return math.cos(S + math.pi / 4) / math.sqrt(12 * math.pi * abs(emb.volume))


@dataclass
class SweepRow:
    k: int
    args: tuple
    exact: ExactRational
    asym: float
    amplitude: float

    @property
    def abs_err(self) -> float:
        return abs(float(self.exact) - self.asym)

    @property
    def rel_err(self) -> float:
        return self.abs_err / self.amplitude


def compare_sweep(pattern, scales) -> tuple[list[SweepRow], list[str]]:
    """Scale every j by each k and tabulate exact against asymptotic values."""
    base = [parse_half_integer(a) for a in pattern]
    rows, notes = [], []
    for k in scales:
        scaled = [Fraction(k) * b for b in base]
        if any((2 * s).denominator != 1 for s in scaled):
            notes.append(f"k={k}: scaled arguments are not half-integers, skipped")
            continue
        if not triads_ok(scaled):
            notes.append(f"k={k}: a triad fails the triangle or parity rule, skipped")
            continue
        try:
            asym = pr_asymptotic(scaled)
            amp = pr_amplitude(scaled)
        except CausticError as exc:
            notes.append(f"k={k}: {exc}")
            continue
        rows.append(SweepRow(k, tuple(scaled), exact_6j(scaled), asym, amp))
    return rows, notes


def windowed_rms(pattern, k0: int, width: int = 4) -> float:
    """RMS of |exact - asym| / amplitude over k0 .. k0 + width - 1."""
    rows, _ = compare_sweep(pattern, range(k0, k0 + width))
    if not rows:
        raise ValueError(f"no valid scales in window starting at {k0}")
    return math.sqrt(sum(r.rel_err**2 for r in rows) / len(rows))
