"""Exact scalars: rational and cyclotomic field arithmetic.

Every coefficient in the workbench lives in Q(zeta_N) for a fixed
conductor N chosen per session (N = 1 or 2 degenerates to plain
rationals).  Elements are stored as coefficient vectors of length
phi(N) on the power basis 1, z, ..., z^(phi(N)-1), reduced modulo the
N-th cyclotomic polynomial after every operation.  There is no
floating point anywhere: coefficients are `fractions.Fraction`.

>>> F = CycloField(4)
>>> i = F.zeta(4, 1)
>>> i * i == F.scalar(-1)
True
>>> str(F.scalar(Fraction(1, 2)) + F.scalar(Fraction(1, 2)))
'1'
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


class ConductorMismatch(ValueError):
    """Raised when operands live in different cyclotomic fields."""


class ScalarDivisionError(ZeroDivisionError):
    """Raised on division by the zero scalar."""


def euler_phi(n: int) -> int:
    result = n
    p, m = 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    """Exact division of polynomials given as low-to-high coefficient lists."""
    num = list(num)
    quot = [Fraction(0)] * (max(len(num) - len(den) + 1, 0))
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] / den[-1]
        quot[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d;
    n stays tiny here so the recursion is cheap.

    >>> cyclotomic_polynomial(4)
    (Fraction(1, 1), Fraction(0, 1), Fraction(1, 1))
    """
    if n == 1:
        return (Fraction(-1), Fraction(1))
    num = [Fraction(0)] * (n + 1)
    num[0], num[n] = Fraction(-1), Fraction(1)
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem, "cyclotomic division must be exact"
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_table(conductor: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row k is x^(phi+k) reduced mod Phi_N, for k = 0 .. phi-2."""
    phi = euler_phi(conductor)
    poly = cyclotomic_polynomial(conductor)
    # x^phi = -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1}) since Phi is monic
    rows = []
    current = [-c for c in poly[:phi]]
    rows.append(tuple(current))
    for _ in range(phi - 2):
        shifted = [Fraction(0)] + current[:-1]
        top = current[-1]
        if top:
            for j in range(phi):
                shifted[j] += top * rows[0][j]
        current = shifted
        rows.append(tuple(current))
    return tuple(rows)


class Scalar:
    """An element of Q(zeta_N), immutable and hashable."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs):
        phi = euler_phi(conductor)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(
                f"expected {phi} coefficients for conductor {conductor}, got {len(coeffs)}")
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def rational(value, conductor: int = 1) -> "Scalar":
        phi = euler_phi(conductor)
        coeffs = [Fraction(value)] + [Fraction(0)] * (phi - 1)
        return Scalar(conductor, coeffs)

    # -- ring structure -------------------------------------------------

    def _check(self, other: "Scalar"):
        if self.conductor != other.conductor:
            raise ConductorMismatch(
                f"conductor mismatch: {self.conductor} vs {other.conductor}")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return Scalar(self.conductor,
                      [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return Scalar(self.conductor,
                      [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Scalar(self.conductor, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        phi = len(a)
        if phi == 1:
            return Scalar(self.conductor, (a[0] * b[0],))
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        table = _reduction_table(self.conductor)
        out = conv[:phi]
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = table[k - phi]
                for j in range(phi):
                    out[j] += c * row[j]
        return Scalar(self.conductor, out)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ScalarDivisionError("division by zero scalar")
        phi = len(self.coeffs)
        if phi == 1:
            return Scalar(self.conductor, (1 / self.coeffs[0],))
        # extended Euclid in Q[x] against the (irreducible) cyclotomic polynomial
        modulus = list(cyclotomic_polynomial(self.conductor))
        r0, r1 = modulus, [c for c in self.coeffs]
        while r1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, s0, r1, s1 = r1, s1, r, s
        assert r1, "cyclotomic polynomial is irreducible over Q"
        lead = r1[0]
        inv = [c / lead for c in s1]
        inv = inv[:phi] + [Fraction(0)] * max(0, phi - len(inv))
        # degree of s1 stays below phi because deg(r1)=0 < deg(self) <= phi-1
        return Scalar(self.conductor, inv[:phi])

    def __truediv__(self, other):
        other = self._coerce(other)
        self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Scalar.rational(1, self.conductor)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.rational(other, self.conductor)
        return NotImplemented

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    # -- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.rational(other, self.conductor)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.conductor, self.coeffs))

    def __repr__(self):
        return f"Scalar({self.conductor}, {self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mon = f"z{self.conductor}" if k == 1 else f"z{self.conductor}^{k}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        text = "+".join(parts)
        return text.replace("+-", "-")


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    out = [x - y for x, y in zip(a, b)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


class CycloField:
    """A fixed cyclotomic field Q(zeta_N); hands out scalars of that conductor."""

    def __init__(self, conductor: int = 1):
        if conductor < 1:
            raise ValueError("conductor must be >= 1")
        self.conductor = conductor

    @property
    def zero(self) -> Scalar:
        return Scalar.rational(0, self.conductor)

    @property
    def one(self) -> Scalar:
        return Scalar.rational(1, self.conductor)

    def scalar(self, value) -> Scalar:
        return Scalar.rational(value, self.conductor)

    def zeta(self, order: int, power: int = 1) -> Scalar:
        """zeta_order^power as an element of this field.

        Requires order to divide the conductor so the root actually has
        a monomial representative; the result has multiplicative order
        dividing `order`.
        """
        if order < 1:
            raise ValueError("order must be >= 1")
        if self.conductor % order != 0:
            raise ConductorMismatch(
                f"order {order} does not divide conductor {self.conductor}")
        exponent = (self.conductor // order) * power % self.conductor
        if self.conductor <= 2:
            return self.scalar(1 if exponent == 0 else -1)
        phi = euler_phi(self.conductor)
        coeffs = [Fraction(0)] * phi
        if exponent < phi:
            coeffs[exponent] = Fraction(1)
            return Scalar(self.conductor, coeffs)
        # reduce x^exponent mod Phi_N by repeated squaring on scalars
        z = Scalar(self.conductor, [Fraction(0), Fraction(1)] + [Fraction(0)] * (phi - 2))
        return z ** exponent

    def roots_of_unity(self) -> list[Scalar]:
        """All roots of unity contained in the field: the group <zeta_M>
        with M = conductor for even conductors and 2*conductor otherwise."""
        m = self.conductor if self.conductor % 2 == 0 else 2 * self.conductor
        minus_one = self.scalar(-1)
        out, seen = [], set()
        z = self.zeta(self.conductor, 1)
        current = self.one
        for _ in range(self.conductor):
            for s in (current, current * minus_one):
                if s not in seen:
                    seen.add(s)
                    out.append(s)
            current = current * z
        assert len(out) == m
        return out

    def random_scalar(self, rng, lo: int = -3, hi: int = 3) -> Scalar:
        phi = euler_phi(self.conductor)
        return Scalar(self.conductor, [Fraction(rng.randint(lo, hi)) for _ in range(phi)])

    def parse(self, text: str) -> Scalar:
        return parse_scalar(text, self.conductor)

    def __repr__(self):
        return f"CycloField({self.conductor})"

    def __eq__(self, other):
        return isinstance(other, CycloField) and other.conductor == self.conductor

    def __hash__(self):
        return hash(("CycloField", self.conductor))


def root_of_unity(order: int, power: int, conductor: int) -> Scalar:
    """Standalone form of CycloField.zeta for callers holding a conductor."""
    return CycloField(conductor).zeta(order, power)


def common_conductor(*orders: int) -> int:
    n = 1
    for o in orders:
        n = n * o // gcd(n, o)
    return n


def parse_scalar(text: str, conductor: int) -> Scalar:
    """Parse the textual scalar form used in configs and reports.

    Accepts sums of terms like `3/2`, `-z4`, `2*z12^5`; the zN marker
    must match the session conductor.

    >>> parse_scalar("1/2 + 1/2", 1).rational_value()
    Fraction(1, 1)
    """
    field = CycloField(conductor)
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    s = s.replace("-", "+-")
    if s.startswith("+"):
        s = s[1:]
    total = field.zero
    for term in s.split("+"):
        if not term:
            raise ValueError(f"malformed scalar literal {text!r}")
        total = total + _parse_term(term, field)
    return total


def _parse_term(term: str, field: CycloField) -> Scalar:
    coef = Fraction(1)
    body = term
    if "*" in term:
        head, body = term.split("*", 1)
        coef = Fraction(head)
    elif "z" not in term:
        return field.scalar(Fraction(term))
    elif term.startswith("-z"):
        coef, body = Fraction(-1), term[1:]
    if not body.startswith("z"):
        raise ValueError(f"malformed scalar term {term!r}")
    rest = body[1:]
    if "^" in rest:
        n_str, k_str = rest.split("^", 1)
        n, k = int(n_str), int(k_str)
    else:
        n, k = int(rest), 1
    if n != field.conductor:
        raise ConductorMismatch(
            f"scalar literal uses z{n} but session conductor is {field.conductor}")
    return field.scalar(coef) * field.zeta(n, k)
