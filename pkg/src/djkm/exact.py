"""Exact scalar, polynomial-in-c and truncated Laurent series arithmetic.

Scalars are :class:`fractions.Fraction`. Polynomials in the parameter ``c``
are :class:`PolyC`, and formal series in ``z`` with a trusted truncation
order are :class:`LaurentSeries`. Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "Fraction",
    "PolyC",
    "C",
    "LaurentSeries",
    "NotDivisible",
    "ExponentMinusOne",
    "TruncationUnderflow",
    "parse_rational",
    "rational_json",
    "poly_arith",
    "exact_div",
    "series_arith",
    "series_sqrt_gegenbauer",
    "series_sqrt_newton",
]


class NotDivisible(ArithmeticError):
    """Polynomial division left a nonzero remainder."""


class ExponentMinusOne(ArithmeticError):
    """Formal antiderivative of a series with a z^-1 term."""


class TruncationUnderflow(LookupError):
    """A coefficient at or beyond the trusted truncation order was requested."""


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    text = str(text).strip()
    if not text:
        raise ValueError("empty rational literal")
    try:
        return Fraction(text)
    except ValueError as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def rational_json(q) -> list[int]:
    q = Fraction(q)
    return [q.numerator, q.denominator]


def _scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


class PolyC:
    """Polynomial in the parameter ``c`` with rational coefficients.

    Coefficients are stored lowest degree first with trailing zeros stripped;
    the zero polynomial has an empty coefficient tuple. Instances are
    immutable and hashable, and mix freely with ints and Fractions.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        cs = [_scalar(x) for x in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def const(cls, q) -> PolyC:
        return cls((q,))

    @classmethod
    def coerce(cls, x) -> PolyC:
        if isinstance(x, PolyC):
            return x
        return cls((x,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, PolyC):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == PolyC((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            # constants hash like the scalar they equal
            if len(self.coeffs) <= 1:
                self._hash = hash(self.coeffs[0] if self.coeffs else 0)
            else:
                self._hash = hash(self.coeffs)
        return self._hash

    def __add__(self, other):
        if not isinstance(other, PolyC):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            if not other:
                return self
            cs = list(self.coeffs) or [Fraction(0)]
            cs[0] += other
            return PolyC(cs)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, x in enumerate(b):
            cs[i] += x
        return PolyC(cs)

    __radd__ = __add__

    def __neg__(self):
        return PolyC(-x for x in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, (PolyC, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PolyC):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            if not other:
                return ZERO
            return PolyC(x * other for x in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return ZERO
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return PolyC(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PolyC):
            if other.degree <= 0:
                if not other:
                    raise ZeroDivisionError("division by the zero polynomial")
                return self * (1 / other.coeffs[0])
            return exact_div(self, other)
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, k: int):
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: PolyC) -> tuple[PolyC, PolyC]:
        """Long division over Q: returns (q, r) with self = q*other + r."""
        other = PolyC.coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            q = rem[k] / lead
            if q:
                quot[k - d] = q
                for j, y in enumerate(other.coeffs):
                    rem[k - d + j] -= q * y
        return PolyC(quot), PolyC(rem)

    def __call__(self, c0):
        """Evaluate at a rational value of c (Horner)."""
        acc = Fraction(0)
        for x in reversed(self.coeffs):
            acc = acc * c0 + x
        return acc

    def to_json(self) -> list[list[int]]:
        return [rational_json(x) for x in self.coeffs]

    @classmethod
    def from_json(cls, data) -> PolyC:
        return cls(Fraction(n, d) for n, d in data)

    def __repr__(self):
        return f"PolyC({str(self)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, x in enumerate(self.coeffs):
            if not x:
                continue
            sign = "-" if x < 0 else "+"
            x = abs(x)
            mono = "" if k == 0 else ("c" if k == 1 else f"c^{k}")
            num = x.numerator
            if mono:
                body = mono if num == 1 else f"{num}{mono}"
            else:
                body = str(num)
            if x.denominator != 1:
                body += f"/{x.denominator}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str) -> PolyC:
        """Inverse of ``str``: terms like ``-1/7 + 32c^2/35``."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return ZERO
        out = ZERO
        i, n = 0, len(text)
        while i < n:
            sign = 1
            if text[i] in "+-":
                sign = -1 if text[i] == "-" else 1
                i += 1
            j = i
            while j < n and text[j] not in "+-":
                j += 1
            term = text[i:j]
            i = j
            num, _, den = term.partition("/")
            deg = 0
            if "c" in num:
                coef_txt, _, pw = num.partition("c")
                deg = int(pw[1:]) if pw.startswith("^") else 1
                coef = int(coef_txt) if coef_txt else 1
            else:
                coef = int(num)
            q = Fraction(sign * coef, int(den) if den else 1)
            out = out + PolyC([0] * deg + [q])
        return out


ZERO = PolyC()
ONE = PolyC((1,))
C = PolyC((0, 1))


def poly_arith(a, b, op: str) -> PolyC:
    a, b = PolyC.coerce(a), PolyC.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial op {op!r}")


def exact_div(a, b) -> PolyC:
    """Return ``q`` with ``a == q * b``; raise NotDivisible otherwise."""
    a, b = PolyC.coerce(a), PolyC.coerce(b)
    q, r = a.divmod(b)
    if r:
        raise NotDivisible(f"({a}) / ({b}) leaves remainder {r}")
    return q


def _add_coeffs(x, y):
    return x + y


class LaurentSeries:
    """Truncated Laurent series ``sum_k a_k z^k`` with exact coefficients.

    ``order`` is the truncation order N: coefficients are trusted for
    exponents < N only. ``order=None`` marks an exact (finite) series such as
    a polynomial. Coefficients may be PolyC or Fraction.
    """

    __slots__ = ("min_exponent", "coefficients", "order")

    def __init__(self, min_exponent: int, coefficients, order: int | None):
        cs = list(coefficients)
        if order is not None:
            cs = cs[: max(order - min_exponent, 0)]
        lo = 0
        while lo < len(cs) and not cs[lo]:
            lo += 1
        while cs and not cs[-1]:
            cs.pop()
        if lo >= len(cs):
            self.min_exponent = min_exponent if order is None else min(min_exponent, order)
            self.coefficients = ()
        else:
            self.min_exponent = min_exponent + lo
            self.coefficients = tuple(cs[lo:])
        self.order = order

    @classmethod
    def from_dict(cls, terms: dict, order: int | None) -> LaurentSeries:
        if not terms:
            return cls(0, (), order)
        lo, hi = min(terms), max(terms)
        cs = [terms.get(k, 0) for k in range(lo, hi + 1)]
        return cls(lo, cs, order)

    @classmethod
    def polynomial(cls, terms: dict) -> LaurentSeries:
        return cls.from_dict(terms, None)

    def valuation(self) -> int | None:
        """Lowest exponent with a nonzero coefficient (None for zero)."""
        return self.min_exponent if self.coefficients else None

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, k: int):
        if self.order is not None and k >= self.order:
            raise TruncationUnderflow(f"z^{k} requested but series is trusted only below z^{self.order}")
        i = k - self.min_exponent
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return 0

    coefficient = __getitem__

    def items(self):
        for i, x in enumerate(self.coefficients):
            if x:
                yield self.min_exponent + i, x

    def truncate(self, order: int) -> LaurentSeries:
        if self.order is not None and order > self.order:
            raise TruncationUnderflow(f"cannot raise trusted order {self.order} to {order}")
        return LaurentSeries(self.min_exponent, self.coefficients, order)

    def _span_lo(self):
        return self.min_exponent if self.coefficients else None

    @staticmethod
    def _min_order(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        terms = dict(self.items())
        for k, x in other.items():
            terms[k] = terms.get(k, 0) + x
        return LaurentSeries.from_dict(terms, self._min_order(self.order, other.order))

    def __neg__(self):
        return LaurentSeries(self.min_exponent, [-x for x in self.coefficients], self.order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> LaurentSeries:
        return LaurentSeries(self.min_exponent, [x * k for x in self.coefficients], self.order)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        va, vb = self.valuation(), other.valuation()
        # product coefficient at z^k is trusted iff every contributing factor
        # coefficient is: k < order_a + val_b and k < order_b + val_a
        bounds = []
        if self.order is not None:
            bounds.append(self.order + (vb if vb is not None else 0))
        if other.order is not None:
            bounds.append(other.order + (va if va is not None else 0))
        if va is None or vb is None:
            # a zero factor: the result is zero up to the tightest bound
            order = min(bounds) if bounds else None
            if va is None and self.order is not None and vb is not None:
                order = self.order + vb
            elif vb is None and other.order is not None and va is not None:
                order = other.order + va
            return LaurentSeries(0, (), order)
        order = min(bounds) if bounds else None
        terms: dict[int, object] = {}
        for i, x in self.items():
            for j, y in other.items():
                k = i + j
                if order is not None and k >= order:
                    continue
                terms[k] = terms.get(k, 0) + x * y
        return LaurentSeries.from_dict(terms, order)

    __rmul__ = __mul__

    def derivative(self) -> LaurentSeries:
        terms = {k - 1: k * x for k, x in self.items() if k != 0}
        order = None if self.order is None else self.order - 1
        return LaurentSeries.from_dict(terms, order)

    def antiderivative(self) -> LaurentSeries:
        """Formal integral with zero constant term."""
        terms = {}
        for k, x in self.items():
            if k == -1:
                raise ExponentMinusOne("series has a nonzero z^-1 coefficient")
            terms[k + 1] = x * Fraction(1, k + 1)
        order = None if self.order is None else self.order + 1
        return LaurentSeries.from_dict(terms, order)

    def shift(self, s: int) -> LaurentSeries:
        """Multiply by z^s."""
        order = None if self.order is None else self.order + s
        return LaurentSeries(self.min_exponent + s, self.coefficients, order)

    def inverse(self, order: int) -> LaurentSeries:
        """Multiplicative inverse trusted to ``order`` (leading coeff must be a unit)."""
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("inverse of the zero series")
        lead = self.coefficients[0]
        inv_lead = _unit_inverse(lead)
        # normalize to 1 + higher terms, then solve coefficient by coefficient
        n = order + v
        a = [self[v + i] if (self.order is None or v + i < self.order) else None for i in range(max(n, 0))]
        out = []
        for i in range(max(n - 0, 0)):
            if i == 0:
                out.append(inv_lead)
                continue
            acc = 0
            for j in range(1, i + 1):
                aj = a[j] if j < len(a) else 0
                if aj is None:
                    raise TruncationUnderflow("input series not trusted far enough for inverse")
                if aj:
                    acc = acc + aj * out[i - j]
            out.append(-(acc * inv_lead))
        return LaurentSeries(-v, out, order)

    def is_zero_to(self, order: int) -> bool:
        if self.order is not None and self.order < order:
            raise TruncationUnderflow(f"series trusted only to {self.order}, asked for {order}")
        return all(k >= order for k, _ in self.items())

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.order == other.order
            and dict(self.items()) == dict(other.items())
        )

    def __repr__(self):
        body = " + ".join(f"({x})z^{k}" for k, x in self.items()) or "0"
        tail = "" if self.order is None else f" + O(z^{self.order})"
        return f"LaurentSeries({body}{tail})"

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, PolyC):
                return x.to_json()
            return rational_json(x)

        return {
            "min_exponent": self.min_exponent,
            "order": self.order,
            "coefficients": [enc(x) for x in self.coefficients],
        }


def _unit_inverse(x):
    if isinstance(x, PolyC):
        if x.degree != 0:
            raise ArithmeticError(f"leading coefficient {x} is not a unit in Q[c]")
        return PolyC((1 / x.coeffs[0],))
    return Fraction(1) / x


def series_arith(a: LaurentSeries, b: LaurentSeries | None, op: str) -> LaurentSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "derivative":
        return a.derivative()
    if op == "antiderivative":
        return a.antiderivative()
    raise ValueError(f"unknown series op {op!r}")


def series_sqrt_gegenbauer(order: int) -> LaurentSeries:
    """``z*sqrt(1 - 2cz^2 + z^4)`` from the Gegenbauer stream, trusted below z^order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    from .families import gegenbauer

    terms = {}
    n = 0
    while 2 * n + 1 < order:
        terms[2 * n + 1] = gegenbauer(Fraction(-1, 2), n)
        n += 1
    return LaurentSeries.from_dict(terms, order)


def series_sqrt_newton(order: int) -> LaurentSeries:
    """Same series by Newton iteration y <- (y + f/y)/2 on f = 1 - 2cz^2 + z^4.

    Independent of the Gegenbauer recursion; used as a cross-check.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    target = order - 1  # y is multiplied by z afterwards
    f = LaurentSeries.polynomial({0: ONE, 2: -2 * C, 4: ONE})
    y = LaurentSeries.polynomial({0: ONE}).truncate(1)
    prec = 1
    half = Fraction(1, 2)
    while prec < target:
        prec = min(2 * prec, target)
        yp = LaurentSeries(y.min_exponent, y.coefficients, prec)
        y = (yp + f.truncate(prec) * yp.inverse(prec)).scale(half).truncate(prec)
    y = y.truncate(target) if y.order is not None and y.order >= target else y
    return y.shift(1).truncate(order)
