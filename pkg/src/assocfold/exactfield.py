"""Exact arithmetic in the real fields Q(theta), theta = 2cos(pi/m).

Elements are stored as an integer numerator vector in the power basis
1, theta, ..., theta^(d-1) over a single positive integer denominator.
Signs are decided by interval evaluation on a dyadic isolating interval of
theta that is bisected until the result excludes zero.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "FieldError",
    "FieldSpec",
    "ExactScalar",
    "make_field",
    "cyclotomic_polynomial",
    "chebyshev_weights",
    "sign",
]


class FieldError(ValueError):
    """Invalid field construction or an operation mixing fields."""


# ---------------------------------------------------------------------------
# integer polynomials, coefficient lists low degree first


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _pdivexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials with monic divisor."""
    a = list(a)
    assert b[-1] == 1
    db = len(b) - 1
    q = [0] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    if any(a):
        raise ArithmeticError("polynomial division is not exact")
    return _trim(q)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Phi_n as a coefficient tuple, by dividing x^n - 1 by Phi_d, d | n, d < n."""
    if n < 1:
        raise FieldError(f"cyclotomic index must be positive, got {n}")
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _pdivexact(p, cyclotomic_polynomial(d))
    return tuple(p)


def _trace_polynomial(phi: Sequence[int]) -> list[int]:
    """Given a palindromic Phi of even degree 2d, return T with Phi(x) = x^d T(x + 1/x)."""
    # peel off the top coefficient against (x + 1/x)^k expansions
    deg = len(phi) - 1
    assert deg % 2 == 0
    d = deg // 2
    # symmetric part: Phi(x)/x^d = sum_{k} a_k (x^k + x^-k) + a_0
    rem = {k - d: c for k, c in enumerate(phi)}
    out = [0] * (d + 1)
    for k in range(d, -1, -1):
        c = rem.get(k, 0)
        out[k] = c
        if c == 0:
            continue
        # subtract c * (x + 1/x)^k
        for j in range(k + 1):
            e = k - 2 * j
            rem[e] = rem.get(e, 0) - c * math.comb(k, j)
    if any(rem.values()):
        raise ArithmeticError("cyclotomic polynomial is not palindromic")
    return _trim(out)


def _peval(p: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _count_sign_changes(seq: list[Fraction]) -> int:
    nz = [v for v in seq if v != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if (a < 0) != (b < 0))


def _sturm_chain(p: Sequence[int]) -> list[list[Fraction]]:
    def deriv(q):
        return [i * q[i] for i in range(1, len(q))] or [Fraction(0)]

    def prem(a, b):
        a = list(a)
        while len(a) >= len(b) and any(a):
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            for j, y in enumerate(b):
                a[shift + j] -= c * y
            a.pop()
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        return a

    chain = [[Fraction(c) for c in p], [Fraction(c) for c in deriv(list(p))]]
    while len(chain[-1]) > 1:
        r = prem(chain[-2], chain[-1])
        if not any(r):
            break
        chain.append([-c for c in r])
    return chain


def _roots_in(chain, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct roots in (lo, hi] by Sturm's theorem."""
    def v(x):
        vals = []
        for q in chain:
            acc = Fraction(0)
            for c in reversed(q):
                acc = acc * x + c
            vals.append(acc)
        return _count_sign_changes(vals)

    return v(lo) - v(hi)


class FieldSpec:
    """The field Q(2cos(pi/m)) with its distinguished real embedding."""

    __slots__ = ("m", "minimal_polynomial", "degree", "isolating_interval",
                 "_levels", "_mulcache", "_one", "_zero", "_theta")

    def __init__(self, m: int, minimal_polynomial: Sequence[int],
                 isolating_interval: tuple[Fraction, Fraction]):
        self.m = m
        self.minimal_polynomial = tuple(minimal_polynomial)
        self.degree = len(self.minimal_polynomial) - 1
        self.isolating_interval = isolating_interval
        self._levels: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        self._mulcache = self._reduction_table()
        self._zero = ExactScalar(self, (0,) * self.degree, 1)
        self._one = ExactScalar(self, (1,) + (0,) * (self.degree - 1), 1)
        if self.degree == 1:
            self._theta = ExactScalar(self, (-self.minimal_polynomial[0],), 1)
        else:
            self._theta = ExactScalar(self, (0, 1) + (0,) * (self.degree - 2), 1)

    def __repr__(self) -> str:
        return f"FieldSpec(m={self.m}, minpoly={list(self.minimal_polynomial)})"

    def __reduce__(self):
        return (make_field, (self.m,))

    # theta^k for d <= k < 2d-1 expressed in the power basis
    def _reduction_table(self) -> list[tuple[int, ...]]:
        d = self.degree
        p = self.minimal_polynomial
        table = []
        # theta^d = -(p_0 + p_1 theta + ... + p_{d-1} theta^{d-1})
        cur = [-c for c in p[:d]]
        for _ in range(max(d - 1, 0)):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(d):
                    cur[j] -= top * p[j]
        return table

    @property
    def zero(self) -> "ExactScalar":
        return self._zero

    @property
    def one(self) -> "ExactScalar":
        return self._one

    @property
    def theta(self) -> "ExactScalar":
        return self._theta

    def __call__(self, value) -> "ExactScalar":
        """Coerce an int, Fraction, coefficient list or scalar into this field."""
        if isinstance(value, ExactScalar):
            if value.field is not self:
                raise FieldError(f"scalar from {value.field!r} used in {self!r}")
            return value
        if isinstance(value, (int, Fraction)):
            v = Fraction(value)
            return ExactScalar(self, (v.numerator,) + (0,) * (self.degree - 1),
                               v.denominator)
        if isinstance(value, str):
            return self(Fraction(value))
        coeffs = [Fraction(c) for c in value]
        if len(coeffs) != self.degree:
            raise FieldError(f"expected {self.degree} coefficients, got {len(coeffs)}")
        return ExactScalar.from_fractions(self, coeffs)

    def theta_interval(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= 2^-bits containing theta."""
        lo, hi = self.isolating_interval
        p = self.minimal_polynomial
        slo = _peval(p, lo)
        if slo == 0:
            return lo, lo
        target = Fraction(1, 1 << bits)
        while hi - lo > target:
            mid = (lo + hi) / 2
            sm = _peval(p, mid)
            if sm == 0:
                return mid, mid
            if (sm < 0) == (slo < 0):
                lo, slo = mid, sm
            else:
                hi = mid
        return lo, hi

    def _power_bounds(self, bits: int):
        """Integer arrays L, U with L_k/2^bits <= theta^k <= U_k/2^bits."""
        got = self._levels.get(bits)
        if got is None:
            lo, hi = self.theta_interval(bits + 4 * self.degree + 8)
            scale = 1 << bits
            los, his = [], []
            for k in range(self.degree):
                # theta >= 0 for every m >= 2, so powers are monotone
                a, b = lo ** k, hi ** k
                los.append(math.floor(a * scale))
                his.append(math.ceil(b * scale))
            got = (tuple(los), tuple(his))
            self._levels[bits] = got
        return got


def _isolate(p: Sequence[int], target: float) -> tuple[Fraction, Fraction]:
    chain = _sturm_chain(p)
    width = Fraction(1, 1 << 20)
    lo = Fraction(math.floor(target * (1 << 20)), 1 << 20) - width
    hi = lo + 3 * width
    while _roots_in(chain, lo, hi) != 1:
        width /= 2
        lo = Fraction(math.floor(target / width)) * width - width
        hi = lo + 3 * width
        if width < Fraction(1, 1 << 200):
            raise ArithmeticError("could not isolate 2cos(pi/m)")
    return lo, hi


@lru_cache(maxsize=None)
def make_field(m: int) -> FieldSpec:
    """Return the field Q(2cos(pi/m)), m >= 2."""
    if not isinstance(m, int) or m < 2:
        raise FieldError(f"dihedral order must be an integer >= 2, got {m!r}")
    phi = cyclotomic_polynomial(2 * m)
    minpoly = _trace_polynomial(phi)
    lo, hi = _isolate(minpoly, 2 * math.cos(math.pi / m))
    return FieldSpec(m, minpoly, (lo, hi))


# ---------------------------------------------------------------------------


class ExactScalar:
    """Immutable element of a FieldSpec."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: FieldSpec, num: tuple[int, ...], den: int):
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_fractions(cls, field: FieldSpec, coeffs: Iterable[Fraction]) -> "ExactScalar":
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = tuple(c.numerator * (den // c.denominator) for c in coeffs)
        return _make(field, num, den)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise FieldError(f"{self} is irrational")
        return Fraction(self.num[0], self.den)

    # -- coercion
    def _coerce(self, other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            if other.field is not self.field:
                raise FieldError(
                    f"cannot combine scalars of {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, int):
            return ExactScalar(self.field, (other,) + (0,) * (self.field.degree - 1), 1)
        if isinstance(other, Fraction):
            return ExactScalar(self.field, (other.numerator,) + (0,) * (self.field.degree - 1),
                               other.denominator)
        return NotImplemented

    # -- ring operations
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return _make(self.field, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        return _make(self.field,
                     tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
                     self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(self.field, tuple(-a for a in self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.field.zero
            return _make(self.field, tuple(a * other for a in self.num), self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.field.degree
        if d == 1:
            return _make(self.field, (self.num[0] * o.num[0],), self.den * o.den)
        return _make(self.field, tuple(_mul_num(self.field, self.num, o.num)), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero element")
        d = self.field.degree
        if d == 1:
            n = self.num[0]
            return _make(self.field, (self.den if n > 0 else -self.den,), abs(n))
        # integer multiplication-by-num matrix, solved fraction-free for e_0;
        # y = det * x is the first adjugate column, so every division is exact
        cols = []
        for k in range(d):
            e = [0] * d
            e[k] = 1
            cols.append(_mul_num(self.field, self.num, tuple(e)))
        M = [[cols[c][r] for c in range(d)] + [int(r == 0)] for r in range(d)]
        prev = 1
        for c in range(d):
            piv = next(r for r in range(c, d) if M[r][c])
            M[c], M[piv] = M[piv], M[c]
            p = M[c][c]
            for r in range(c + 1, d):
                f = M[r][c]
                M[r] = [(p * M[r][j] - f * M[c][j]) // prev for j in range(d + 1)]
            prev = p
        det = prev
        y = [0] * d
        for r in range(d - 1, -1, -1):
            acc = det * M[r][d] - sum(M[r][j] * y[j] for j in range(r + 1, d))
            y[r] = acc // M[r][r]
        if det < 0:
            det, y = -det, [-v for v in y]
        return _make(self.field, tuple(v * self.den for v in y), det)

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            if other < 0:
                return _make(self.field, tuple(-a for a in self.num), self.den * -other)
            return _make(self.field, self.num, self.den * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order
    def sign(self) -> int:
        return _num_sign(self.field, self.num)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return (other.field is self.field and self.den == other.den
                    and self.num == other.num)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(Fraction(self.num[0], self.den))
            else:
                h = hash((self.field.m, self.num, self.den))
            self._hash = h
        return h

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare ExactScalar with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return not self.is_zero()

    # -- display / serialization
    def approx(self, digits: int = 12) -> Decimal:
        """Decimal approximation with the requested significant digits."""
        if self.is_zero():
            return Decimal(0)
        if self.is_rational():
            val = Fraction(self.num[0], self.den)
            lo = hi = val
        else:
            bits = 64
            while True:
                lo, hi = _num_interval(self.field, self.num, bits)
                lo, hi = Fraction(lo, self.den << bits), Fraction(hi, self.den << bits)
                mag = min(abs(lo), abs(hi))
                if lo.numerator * hi.numerator > 0 and (hi - lo) < mag * Fraction(1, 10 ** (digits + 6)):
                    break
                bits *= 2
        mid = (lo + hi) / 2
        with localcontext() as ctx:
            ctx.prec = digits + 10
            dec = Decimal(mid.numerator) / Decimal(mid.denominator)
            ctx.prec = digits
            return +dec

    def __float__(self):
        return float(self.approx(17))

    def to_json(self) -> dict:
        return {
            "coeffs": [_frac_str(c) for c in self.coefficients],
            "approx": _approx_str(self.approx(12)),
        }

    @classmethod
    def from_json(cls, field: FieldSpec, data: dict) -> "ExactScalar":
        return field([Fraction(c) for c in data["coeffs"]])

    def __repr__(self):
        return f"ExactScalar({self})"

    def __str__(self):
        if self.is_rational():
            return _frac_str(Fraction(self.num[0], self.den))
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if k and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = _frac_str(c) + ("*" if mono else "")
            terms.append(coef + mono)
        return " + ".join(terms).replace("+ -", "- ") + f" [t=2cos(pi/{self.field.m})]"


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _approx_str(d: Decimal) -> str:
    s = format(d, ".12g")
    return s


def _mul_num(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of two integer coefficient vectors, reduced mod the minimal polynomial."""
    d = field.degree
    prod = _pmul(a, b)
    out = prod[:d]
    for k, red in enumerate(field._mulcache):
        c = prod[d + k]
        if c:
            for j in range(d):
                out[j] += c * red[j]
    return out


def _make(field: FieldSpec, num: tuple[int, ...], den: int) -> ExactScalar:
    g = den
    for a in num:
        if a:
            g = math.gcd(g, a)
            if g == 1:
                break
    if not any(num):
        return ExactScalar(field, num, 1)
    if g != 1:
        num = tuple(a // g for a in num)
        den //= g
    return ExactScalar(field, num, den)


def _num_interval(field: FieldSpec, num: tuple[int, ...], bits: int) -> tuple[int, int]:
    los, his = field._power_bounds(bits)
    lo = hi = 0
    for a, l, h in zip(num, los, his):
        if a > 0:
            lo += a * l
            hi += a * h
        elif a < 0:
            lo += a * h
            hi += a * l
    return lo, hi


def _num_sign(field: FieldSpec, num: tuple[int, ...]) -> int:
    if field.degree == 1:
        a = num[0]
        return (a > 0) - (a < 0)
    if not any(num):
        return 0
    if not any(num[1:]):
        a = num[0]
        return (a > 0) - (a < 0)
    bits = 48
    while True:
        lo, hi = _num_interval(field, num, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
        if bits > 1 << 16:
            raise ArithmeticError("sign determination did not converge")


def sign(a) -> int:
    """Sign of an ExactScalar, int or Fraction."""
    if isinstance(a, ExactScalar):
        return a.sign()
    return (a > 0) - (a < 0)


def chebyshev_weights(field: FieldSpec, count: int) -> list[ExactScalar]:
    """w_1 = 1, w_2 = theta, w_{k+1} = theta w_k - w_{k-1}; w_k = U_{k-1}(theta/2)."""
    out: list[ExactScalar] = []
    prev, cur = field.zero, field.one
    for _ in range(count):
        out.append(cur)
        prev, cur = cur, field.theta * cur - prev
    return out
