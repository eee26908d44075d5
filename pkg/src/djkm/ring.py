"""Arithmetic in R = C[t, t^-1, u | u^2 = t^4 - 2ct^2 + 1] and its differentials.

Ring elements are pairs (even, odd) of Laurent polynomials in t meaning
``even + odd*u``. Coefficients live in K, either generic Q[c] (``PolyC``) or
a specialized rational value of c (``Fraction``); a :class:`DJKMRing`
instance fixes that choice through its ``c`` attribute.

One-forms are classes in Omega^1_R / dR written as ``(a + b u) dt``. The
reduction onto the basis w0 = [t^-1 dt], w_-k = [t^-k u dt] (k = 1..4) is
done by the exact-form relation

    (12 + 2i) t^(i+3) u dt = -2i t^(i-1) u dt + 2c(6 + 2i) t^(i+1) u dt

applied upward for large exponents and downward for small ones. That
reduction is the oracle every closed-form central term is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import C, PolyC
from .families import P

__all__ = [
    "RingElement",
    "CentralElement",
    "OneForm",
    "DJKMRing",
    "ZeroElement",
    "GENERIC",
]


class ZeroElement(ValueError):
    """Operation undefined on the zero ring element."""


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def _lp_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v * scale
    return _clean(out)


def _lp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return _clean(out)


def _lp_deriv(a: dict) -> dict:
    return _clean({k - 1: k * v for k, v in a.items() if k})


class RingElement:
    """``even(t) + odd(t) * u`` with finite support."""

    __slots__ = ("even", "odd")

    def __init__(self, even=None, odd=None):
        self.even = _clean(dict(even or {}))
        self.odd = _clean(dict(odd or {}))

    @classmethod
    def t(cls, k: int = 1, coeff=1) -> RingElement:
        return cls({k: coeff})

    @classmethod
    def tu(cls, k: int = 0, coeff=1) -> RingElement:
        return cls(None, {k: coeff})

    @classmethod
    def monomial(cls, k: int, parity: int, coeff=1) -> RingElement:
        return cls.tu(k, coeff) if parity else cls.t(k, coeff)

    def __bool__(self):
        return bool(self.even or self.odd)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((frozenset(self.even.items()), frozenset(self.odd.items())))

    def __add__(self, other):
        return RingElement(_lp_add(self.even, other.even), _lp_add(self.odd, other.odd))

    def __neg__(self):
        return RingElement({k: -v for k, v in self.even.items()}, {k: -v for k, v in self.odd.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> RingElement:
        return RingElement({k: v * q for k, v in self.even.items()}, {k: v * q for k, v in self.odd.items()})

    def terms(self):
        """Yield (exponent, parity, coeff) for every basis monomial."""
        for k in sorted(self.even):
            yield k, 0, self.even[k]
        for k in sorted(self.odd):
            yield k, 1, self.odd[k]

    def __repr__(self):
        parts = [f"({v})t^{k}" for k, v in sorted(self.even.items())]
        parts += [f"({v})t^{k}u" for k, v in sorted(self.odd.items())]
        return "RingElement(" + (" + ".join(parts) or "0") + ")"

    def to_json(self) -> dict:
        def enc(d):
            out = []
            for k in sorted(d):
                v = d[k]
                if isinstance(v, PolyC):
                    out.append([k, v.to_json()])
                else:
                    q = Fraction(v)
                    out.append([k, q.numerator, q.denominator])
            return out

        return {"even": enc(self.even), "odd": enc(self.odd)}

    @classmethod
    def from_json(cls, data: dict) -> RingElement:
        def dec(rows):
            out = {}
            for row in rows:
                if len(row) == 3:
                    out[int(row[0])] = Fraction(int(row[1]), int(row[2]))
                else:
                    out[int(row[0])] = PolyC.from_json(row[1])
            return out

        return cls(dec(data.get("even", [])), dec(data.get("odd", [])))


CENTRAL_LABELS = ("w0", "w-1", "w-2", "w-3", "w-4")


@dataclass(frozen=True)
class CentralElement:
    """Coordinates on (w0, w-1, w-2, w-3, w-4)."""

    z0: object = 0
    z1: object = 0
    z2: object = 0
    z3: object = 0
    z4: object = 0

    @classmethod
    def basis(cls, j: int, coeff=1) -> CentralElement:
        """w0 for j = 0, w_j for j in -1..-4."""
        coords = [0] * 5
        coords[-j] = coeff
        return cls(*coords)

    @property
    def coords(self) -> tuple:
        return (self.z0, self.z1, self.z2, self.z3, self.z4)

    def __getitem__(self, j: int):
        return self.coords[-j]

    def __add__(self, other):
        return CentralElement(*(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return CentralElement(*(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> CentralElement:
        return CentralElement(*(a * q for a in self.coords))

    def __bool__(self):
        return any(bool(a) for a in self.coords)

    def __eq__(self, other):
        if not isinstance(other, CentralElement):
            return NotImplemented
        return all(a == b for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash(self.coords)

    def items(self):
        """Yield (j, coeff) with j in 0, -1, .., -4 for nonzero coordinates."""
        for i, a in enumerate(self.coords):
            if a:
                yield -i, a

    def to_json(self, full: bool = False) -> dict:
        if full:
            return {
                lab: PolyC.coerce(a).to_json() for lab, a in zip(CENTRAL_LABELS, self.coords)
            }
        return {lab: str(a) for lab, a in zip(CENTRAL_LABELS, self.coords) if a}

    def __repr__(self):
        body = " + ".join(f"({a}){CENTRAL_LABELS[-j]}" for j, a in self.items())
        return f"CentralElement({body or '0'})"


@dataclass(frozen=True)
class OneForm:
    """The class of ``(a(t) + b(t) u) dt`` in Omega^1_R / dR."""

    a: dict
    b: dict

    def __add__(self, other):
        return OneForm(_lp_add(self.a, other.a), _lp_add(self.b, other.b))


class DJKMRing:
    """The ring R with its parameter ``c`` fixed to a PolyC or a Fraction."""

    def __init__(self, c=C):
        if isinstance(c, (int, Fraction)):
            c = Fraction(c)
            if c * c == 1:
                raise ValueError("c must not be +-1")
        self.c = c
        # p(t) = t^4 - 2c t^2 + 1 and p'(t)/2 = 2t^3 - 2c t
        self.p = {4: 1, 2: -2 * c, 0: 1}
        self.half_dp = {3: 2, 1: -2 * c}
        self._psi_cache = {k: CentralElement.basis(k) for k in (-1, -2, -3, -4)}

    @property
    def generic(self) -> bool:
        return isinstance(self.c, PolyC)

    # -- ring structure -------------------------------------------------
    def mul(self, f: RingElement, g: RingElement) -> RingElement:
        even = _lp_add(_lp_mul(f.even, g.even), _lp_mul(_lp_mul(f.odd, g.odd), self.p))
        odd = _lp_add(_lp_mul(f.even, g.odd), _lp_mul(f.odd, g.even))
        return RingElement(even, odd)

    ring_mul = mul

    @staticmethod
    def involution_p(f: RingElement) -> RingElement:
        """t -> t, u -> -u."""
        return RingElement(f.even, {k: -v for k, v in f.odd.items()})

    @staticmethod
    def degree_support(f: RingElement) -> set:
        """Quasi-grading degrees: deg t^i = i, deg t^i u = i + 1/2."""
        if not f:
            raise ZeroElement("degree of the zero element")
        half = Fraction(1, 2)
        return {Fraction(k) for k in f.even} | {k + half for k in f.odd}

    def quasi_graded_bound(self, window: int) -> int:
        """Largest |deg(component) - (deg a + deg b)| over basis products a*b, |index| <= window."""
        if window < 1:
            raise ValueError("window must be >= 1")
        worst = 0
        rng = range(-window, window + 1)
        for i in rng:
            for pi in (0, 1):
                a = RingElement.monomial(i, pi)
                da = self.degree_support(a).pop()
                for j in rng:
                    for pj in (0, 1):
                        b = RingElement.monomial(j, pj)
                        db = self.degree_support(b).pop()
                        prod = self.mul(a, b)
                        for d in self.degree_support(prod):
                            worst = max(worst, abs(d - (da + db)))
        return int(worst)

    @staticmethod
    def triangular_decompose(f: RingElement):
        """Split f = minus + h*1 + plus with plus in C(1+u) + C[t,u]t.

        ``minus`` is spanned by t^-k, t^-k u (k >= 1) and ``h`` is a scalar.
        """
        minus_e = {k: v for k, v in f.even.items() if k < 0}
        minus_o = {k: v for k, v in f.odd.items() if k < 0}
        plus_e = {k: v for k, v in f.even.items() if k > 0}
        plus_o = {k: v for k, v in f.odd.items() if k > 0}
        u0 = f.odd.get(0, 0)
        h = f.even.get(0, 0) - u0
        if u0:
            # u0 * u = u0 * (1 + u) - u0
            plus_e[0] = u0
            plus_o[0] = u0
        return RingElement(minus_e, minus_o), h, RingElement(plus_e, plus_o)

    # -- differentials ----------------------------------------------------
    def one_form(self, f: RingElement, g: RingElement) -> OneForm:
        """Class of f dg as (a + b u) dt modulo exact forms.

        Uses u du = p'(t)/2 dt and h(t) du = -h'(t) u dt (mod dR).
        """
        dg_dt = RingElement(_lp_deriv(g.even), _lp_deriv(g.odd))
        prod = self.mul(f, dg_dt)
        a = _lp_add(prod.even, _lp_mul(_lp_mul(f.odd, g.odd), self.half_dp))
        b = _lp_add(prod.odd, _lp_deriv(_lp_mul(f.even, g.odd)), scale=-1)
        return OneForm(a, b)

    def differential(self, f: RingElement) -> OneForm:
        return self.one_form(RingElement({0: 1}), f)

    def psi(self, k: int) -> CentralElement:
        """Reduction of t^k u dt onto the w-basis (the oracle)."""
        cache = self._psi_cache
        if k in cache:
            return cache[k]
        c = self.c
        if k >= 0:
            top = max(j for j in cache if j >= -4) if cache else -1
            for j in range(max(top + 1, 0), k + 1):
                # (2j+6) t^j u dt = -2(j-3) t^(j-4) u dt + 4jc t^(j-2) u dt
                val = cache[j - 4].scale(-2 * (j - 3)) + cache[j - 2].scale(4 * j * c)
                cache[j] = val.scale(Fraction(1, 2 * j + 6))
        else:
            bottom = min(cache)
            for j in range(min(bottom - 1, -5), k - 1, -1):
                i = j + 1
                # -2i t^(i-1) u dt = (12+2i) t^(i+3) u dt - 2c(6+2i) t^(i+1) u dt
                val = cache[i + 3].scale(12 + 2 * i) + cache[i + 1].scale(-2 * c * (6 + 2 * i))
                cache[j] = val.scale(Fraction(1, -2 * i))
        return cache[k]

    def reduce(self, w: OneForm) -> CentralElement:
        out = CentralElement(w.a.get(-1, 0))
        for k, v in w.b.items():
            out = out + self.psi(k).scale(v)
        return out

    def kassel_cocycle(self, f: RingElement, g: RingElement) -> CentralElement:
        """The central term [f dg] of the universal central extension."""
        return self.reduce(self.one_form(f, g))

    # -- closed form --------------------------------------------------------
    def psi_table(self, k: int) -> CentralElement:
        """Closed form of [t^k u dt] through the polynomial families."""
        c = self.c
        ev = (lambda poly: poly) if self.generic else (lambda poly: poly(c))
        if -4 <= k <= -1:
            return CentralElement.basis(k)
        if k >= 0:
            if k % 2:
                s = ev(P(-3, k))
                return CentralElement(0, s * c, 0, s, 0)
            return CentralElement(0, 0, ev(P(-2, k)), 0, ev(P(-4, k)))
        idx = -k - 4
        if idx % 2:
            s = ev(P(-3, idx))
            return CentralElement(0, s, 0, s * c, 0)
        return CentralElement(0, 0, ev(P(-2, idx)), 0, ev(P(-4, idx)))


GENERIC = DJKMRing(C)
