"""Exact arithmetic in the real cyclotomic fields Q(2cos(pi/N)).

An :class:`AlgReal` stores a polynomial in ``beta = 2cos(pi/N)`` reduced
modulo the minimal polynomial of ``beta``.  Values living in different
fields are lifted to the field of the lcm conductor before any arithmetic
or comparison, using ``2cos(pi/N) = C_{M/N}(2cos(pi/M))`` where ``C_k`` is
the Chebyshev-type polynomial with ``C_k(z + 1/z) = z^k + z^-k``.

Ordering is decided by certified interval evaluation (mpmath interval
arithmetic) with an exact-zero shortcut, so comparisons never rely on a
tolerance.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

from mpmath.ctx_iv import MPIntervalContext

__all__ = [
    "AlgReal",
    "beta",
    "minimal_polynomial",
    "four_cos_sq",
    "quantum_integer",
    "sqrt_small",
    "parse_value",
    "approx",
    "arith",
]

Poly = tuple  # tuple of ints, lowest degree first


# ---------------------------------------------------------------------------
# integer polynomial helpers


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials with monic divisor."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(_trim(num)):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> tuple[int, ...]:
    p = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            p = _poly_divexact(p, _cyclotomic(d))
    return tuple(p)


@lru_cache(maxsize=None)
def _chebyshev(k: int) -> tuple[int, ...]:
    """C_k with C_k(z + 1/z) = z^k + z^-k."""
    if k == 0:
        return (2,)
    if k == 1:
        return (0, 1)
    a, b = [2], [0, 1]
    for _ in range(k - 1):
        nxt = [0] + b
        for i, c in enumerate(a):
            nxt[i] -= c
        a, b = b, _trim(nxt)
    return tuple(b)


@lru_cache(maxsize=None)
def minimal_polynomial(conductor: int) -> tuple[int, ...]:
    """Monic integer minimal polynomial of 2cos(pi/conductor), low degree first."""
    if conductor < 1:
        raise ValueError("conductor must be positive")
    if conductor == 1:
        return (2, 1)
    if conductor == 2:
        return (0, 1)
    phi = _cyclotomic(2 * conductor)
    r = (len(phi) - 1) // 2
    # z^-r Phi(z) = a_r + sum_j a_{r+j} (z^j + z^-j)
    out = [0] * (r + 1)
    out[0] += phi[r]
    for j in range(1, r + 1):
        for i, c in enumerate(_chebyshev(j)):
            out[i] += phi[r + j] * c
    return tuple(out)


def _degree(conductor: int) -> int:
    return len(minimal_polynomial(conductor)) - 1


def _reduce(p: Sequence[int], conductor: int) -> list:
    mp = minimal_polynomial(conductor)
    d = len(mp) - 1
    p = list(p)
    for i in range(len(p) - 1, d - 1, -1):
        c = p[i]
        if c:
            for j in range(d + 1):
                p[i - d + j] -= c * mp[j]
    return _trim(p[:d])


@lru_cache(maxsize=None)
def _lift_image(src: int, dst: int) -> tuple[int, ...]:
    """beta_src written as a reduced polynomial in beta_dst (src | dst)."""
    return tuple(_reduce(_chebyshev(dst // src), dst))


@lru_cache(maxsize=None)
def _lift_powers(src: int, dst: int) -> tuple[tuple[int, ...], ...]:
    img = _lift_image(src, dst)
    powers = [(1,)]
    for _ in range(1, _degree(src)):
        powers.append(tuple(_reduce(_poly_mul(powers[-1], img), dst)))
    return tuple(powers)


# ---------------------------------------------------------------------------
# interval evaluation


def _mpf_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


@lru_cache(maxsize=None)
def _iv_context(prec: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


@lru_cache(maxsize=None)
def _iv_beta(conductor: int, prec: int):
    ctx = _iv_context(prec)
    return 2 * ctx.cos(ctx.pi / conductor)


def _interval(nums: Sequence[int], den: int, conductor: int, prec: int) -> tuple[Fraction, Fraction]:
    ctx = _iv_context(prec)
    b = _iv_beta(conductor, prec)
    acc = ctx.mpf(0)
    for c in reversed(nums):
        acc = acc * b + c
    acc = acc / den
    lo, hi = acc._mpi_
    return _mpf_to_fraction(lo), _mpf_to_fraction(hi)


# ---------------------------------------------------------------------------


@total_ordering
class AlgReal:
    """Immutable element of Q(2cos(pi/N)).

    ``nums`` are integer numerators of the coefficients of ``1, beta,
    beta^2, ...``, sharing the positive denominator ``den``.
    """

    __slots__ = ("conductor", "nums", "den", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable = (), *, _raw: bool = False):
        if _raw:
            nums, den = coeffs
        else:
            fr = [Fraction(c) for c in coeffs]
            den = math.lcm(*(f.denominator for f in fr)) if fr else 1
            nums = [int(f * den) for f in fr]
            nums = _reduce(nums, conductor)
        g = math.gcd(den, *nums) if nums else den
        if g > 1:
            nums = [x // g for x in nums]
            den //= g
        self.conductor = conductor
        self.nums = tuple(nums)
        self.den = den if nums else 1
        self._hash = None

    @classmethod
    def _make(cls, conductor: int, nums: list, den: int) -> "AlgReal":
        return cls(conductor, (_trim(nums), den), _raw=True)

    # -- constructors ------------------------------------------------------
    @classmethod
    def rational(cls, value, conductor: int = 1) -> "AlgReal":
        f = Fraction(value)
        return cls._make(conductor, [f.numerator] if f else [], f.denominator)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.nums)

    def is_zero(self) -> bool:
        return not self.nums

    def is_rational(self) -> bool:
        return len(self.nums) <= 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return Fraction(self.nums[0], self.den) if self.nums else Fraction(0)

    # -- lifting -----------------------------------------------------------
    def lift(self, conductor: int) -> "AlgReal":
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"cannot lift conductor {self.conductor} to {conductor}")
        if len(self.nums) <= 1:
            return AlgReal._make(conductor, list(self.nums), self.den)
        powers = _lift_powers(self.conductor, conductor)
        out = [0] * _degree(conductor)
        for c, pw in zip(self.nums, powers):
            if c:
                for i, x in enumerate(pw):
                    out[i] += c * x
        return AlgReal._make(conductor, out, self.den)

    def _common(self, other) -> tuple["AlgReal", "AlgReal"]:
        if not isinstance(other, AlgReal):
            other = AlgReal.rational(other, self.conductor)
        if other.conductor == self.conductor:
            return self, other
        if len(other.nums) <= 1:
            return self, AlgReal._make(self.conductor, list(other.nums), other.den)
        if len(self.nums) <= 1:
            return AlgReal._make(other.conductor, list(self.nums), self.den), other
        m = math.lcm(self.conductor, other.conductor)
        return self.lift(m), other.lift(m)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        n = max(len(a.nums), len(b.nums))
        out = [0] * n
        for i, x in enumerate(a.nums):
            out[i] += x * b.den
        for i, x in enumerate(b.nums):
            out[i] += x * a.den
        return AlgReal._make(a.conductor, out, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return AlgReal._make(self.conductor, [-x for x in self.nums], self.den)

    def __sub__(self, other):
        return self + (-other if isinstance(other, AlgReal) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, AlgReal):
            f = Fraction(other)
            return AlgReal._make(self.conductor, [x * f.numerator for x in self.nums], self.den * f.denominator)
        a, b = self._common(other)
        if len(a.nums) <= 1 or len(b.nums) <= 1:
            prod = _poly_mul(a.nums, b.nums)
        else:
            prod = _reduce(_poly_mul(a.nums, b.nums), a.conductor)
        return AlgReal._make(a.conductor, prod, a.den * b.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = AlgReal.rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "AlgReal":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if len(self.nums) == 1:
            return AlgReal._make(self.conductor, [self.den], self.nums[0]) if self.nums[0] > 0 else AlgReal._make(
                self.conductor, [-self.den], -self.nums[0]
            )
        # extended Euclid over Q: s*self + t*minpoly = 1
        mp = [Fraction(c) for c in minimal_polynomial(self.conductor)]
        a = [Fraction(c) for c in self.nums]
        r0, r1 = mp, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or (len(r1) == 1 and r1[0] == 0):
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim([x - y for x, y in _zip_pad(s0, _fpoly_mul(q, s1))])
        c = r1[0]
        inv = [x / c for x in s1]
        return AlgReal(self.conductor, [x * self.den for x in inv])

    def __truediv__(self, other):
        if not isinstance(other, AlgReal):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, (AlgReal, int, Fraction)):
            return NotImplemented
        if isinstance(other, AlgReal) and self._separated(other, 64):
            # distinct fields are costly to lift into; cheap invariants first
            return False
        a, b = self._common(other)
        return a.den == b.den and a.nums == b.nums

    def _separated(self, other: "AlgReal", prec: int) -> int:
        """+1/-1 if certified intervals at ``prec`` bits separate the two
        values, 0 otherwise (always 0 for a shared conductor)."""
        if self.conductor == other.conductor or len(self.nums) <= 1 and len(other.nums) <= 1:
            return 0
        lo1, hi1 = _interval(self.nums, self.den, self.conductor, prec)
        lo2, hi2 = _interval(other.nums, other.den, other.conductor, prec)
        if hi1 < lo2:
            return -1
        if hi2 < lo1:
            return 1
        return 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    def normalized_trace(self) -> Fraction:
        """Trace over Q divided by the field degree; invariant under lifting."""
        if len(self.nums) <= 1:
            return self.as_fraction()
        return _normalized_trace(self.conductor, self.nums) / self.den

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if len(self.nums) == 1:
            return 1 if self.nums[0] > 0 else -1
        prec = 64
        while True:
            lo, hi = _interval(self.nums, self.den, self.conductor, prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2

    def _cmp(self, other) -> int:
        if isinstance(other, AlgReal):
            for prec in (64, 256, 1024):
                side = self._separated(other, prec)
                if side:
                    return side
        return (self - other).sign()

    def __lt__(self, other):
        if not isinstance(other, (AlgReal, int, Fraction)):
            return NotImplemented
        return self._cmp(other) < 0

    def interval(self, width) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= ``width`` containing the value."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        if len(self.nums) <= 1:
            v = self.as_fraction()
            return v, v
        prec = 64
        while True:
            lo, hi = _interval(self.nums, self.den, self.conductor, prec)
            if hi - lo <= width:
                return lo, hi
            prec *= 2

    def __float__(self):
        lo, hi = self.interval(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def decimal(self, digits: int = 12) -> str:
        """Correctly rounded decimal string with ``digits`` fractional digits."""
        scale = 10**digits
        w = Fraction(1, 10 * scale)
        while True:
            lo, hi = self.interval(w)
            a = round(lo * scale)
            b = round(hi * scale)
            if a == b:
                break
            w /= 1000
        s = "-" if a < 0 else ""
        a = abs(a)
        return f"{s}{a // scale}.{a % scale:0{digits}d}"

    def __repr__(self):
        return f"AlgReal({self.conductor}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_rational():
            return str(self.as_fraction())
        return f"{self.decimal(12)}..."

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [[c.numerator, c.denominator] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "AlgReal":
        if isinstance(obj, (int, str)):
            return cls.rational(Fraction(obj))
        return cls(int(obj["conductor"]), [Fraction(n, d) for n, d in obj["coeffs"]])


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def _fpoly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _qdivmod(num, den):
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    rem = _trim(num[: len(den) - 1])
    return q, rem or [Fraction(0)]


@lru_cache(maxsize=None)
def _power_traces(conductor: int) -> tuple[int, ...]:
    """Tr(beta^k) for k < degree, via Newton's identities on the minimal polynomial."""
    mp = minimal_polynomial(conductor)
    d = len(mp) - 1
    # e-coefficients: x^d + a_{d-1} x^{d-1} + ... ; p_k + a_{d-1} p_{k-1} + ... + k a_{d-k} = 0
    a = mp
    p = [d]
    for k in range(1, d):
        s = k * a[d - k]
        for i in range(1, k):
            s += a[d - i] * p[k - i]
        p.append(-s)
    return tuple(p)


def _normalized_trace(conductor: int, nums) -> Fraction:
    tr = _power_traces(conductor)
    return Fraction(sum(c * t for c, t in zip(nums, tr)), len(minimal_polynomial(conductor)) - 1)


# ---------------------------------------------------------------------------
# named values


def beta(conductor: int) -> AlgReal:
    """2cos(pi/conductor)."""
    return AlgReal._make(conductor, [0, 1] if _degree(conductor) > 1 else _reduce([0, 1], conductor), 1)


def four_cos_sq(n: int) -> AlgReal:
    """The Jones-series value 4cos^2(pi/n) = beta_n^2."""
    if n < 3:
        raise ValueError("four_cos_sq needs n >= 3")
    b = beta(n)
    return b * b


def quantum_integer(m: int, conductor: int) -> AlgReal:
    """[m]_q = sin(m pi/N)/sin(pi/N) as a polynomial U_{m-1} in beta_N."""
    if m <= 0:
        return AlgReal.rational(0, conductor) if m == 0 else -quantum_integer(-m, conductor)
    a, b = [0], [1]
    for _ in range(m - 1):
        nxt = [0] + b
        for i, c in enumerate(a):
            nxt[i] -= c
        a, b = b, _trim(nxt)
    return AlgReal._make(conductor, _reduce(b, conductor), 1)


def sqrt_small(n: int) -> AlgReal:
    """sqrt(n) for n in {1, 2, 3, 5}, in its natural real cyclotomic field."""
    if n == 1:
        return AlgReal.rational(1)
    if n == 2:
        return beta(4)
    if n == 3:
        return beta(6)
    if n == 5:
        return 2 * beta(5) - 1
    raise ValueError(f"sqrt({n}) not supported")


def arith(a: AlgReal, b: AlgReal, op: str) -> AlgReal:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def approx(a: AlgReal, width) -> tuple[Fraction, Fraction]:
    return a.interval(width)


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?(?:\.\d+)?)?\s*\*?\s*(sqrt\(?(\d+)\)?)?\s*")


def parse_value(text: str) -> AlgReal:
    """Parse a rational/decimal or a sum like ``3+sqrt3`` / ``3+sqrt(3)``."""
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty value")
    pos = 0
    total = AlgReal.rational(0)
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse value {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        term = AlgReal.rational(coef)
        if m.group(3):
            term = term * sqrt_small(int(m.group(4)))
        total = total + term * sign
        pos = m.end()
    return total
