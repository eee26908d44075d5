"""The four canonical polynomial families P_{-4}, P_{-3}, P_{-2}, P_{-1}.

Each family solves the recursion

    (6 + 2k) P_k = 4kc P_{k-2} - 2(k-3) P_{k-4},   k >= 0,

from the indicator initial condition P_{which} = 1 and the other three
initial values zero. Three independent routes are provided: the recursion
itself, the closed forms through Gegenbauer polynomials (odd families), and
formal expansion of the elliptic integrals (even families). The generating
function route is checked against the first order ODE it satisfies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import C, ONE, ZERO, LaurentSeries, PolyC, exact_div, series_sqrt_gegenbauer

FAMILIES = (-4, -3, -2, -1)
DEFAULT_KMAX = 50
DEFAULT_SERIES_ORDER = 40


def _check_which(which: int, allowed=FAMILIES) -> int:
    which = int(which)
    if which not in allowed:
        raise ValueError(f"family must be one of {allowed}, got {which}")
    return which


@lru_cache(maxsize=None)
def gegenbauer(lam, n: int) -> PolyC:
    """Gegenbauer polynomial Q_n^(lam)(c) by the three-term recursion."""
    lam = Fraction(lam)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ONE
    if n == 1:
        return 2 * lam * C
    prev = gegenbauer(lam, n - 1)
    prev2 = gegenbauer(lam, n - 2)
    return (2 * (n + lam - 1) * C * prev - (n + 2 * lam - 2) * prev2) * Fraction(1, n)


@dataclass(frozen=True)
class FamilyTable:
    which: int
    entries: tuple  # PolyC for k = -4 .. k_max

    @property
    def k_max(self) -> int:
        return len(self.entries) - 5

    def __getitem__(self, k: int) -> PolyC:
        if k < -4 or k > self.k_max:
            raise IndexError(f"P_{{{self.which},{k}}} outside table range -4..{self.k_max}")
        return self.entries[k + 4]

    def rows(self):
        for i, p in enumerate(self.entries):
            yield i - 4, p

    def to_json(self) -> dict:
        return {
            "which": self.which,
            "k_max": self.k_max,
            "entries": {str(k): p.to_json() for k, p in self.rows()},
        }

    def to_csv(self) -> str:
        width = max((p.degree for p in self.entries), default=0) + 1
        width = max(width, 1)
        lines = ["k," + ",".join(f"c{d}" for d in range(width))]
        for k, p in self.rows():
            cells = []
            for d in range(width):
                q = p.coeffs[d] if d < len(p.coeffs) else Fraction(0)
                cells.append(str(q))
            lines.append(f"{k}," + ",".join(cells))
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def _recursion_entries(which: int, k_max: int) -> tuple:
    vals = {k: (ONE if k == which else ZERO) for k in range(-4, 0)}
    for k in range(0, k_max + 1):
        rhs = 4 * k * C * vals[k - 2] - 2 * (k - 3) * vals[k - 4]
        vals[k] = rhs * Fraction(1, 6 + 2 * k)
    return tuple(vals[k] for k in range(-4, k_max + 1))


def family_by_recursion(which: int, k_max: int = DEFAULT_KMAX) -> FamilyTable:
    which = _check_which(which)
    if k_max < -1:
        raise ValueError("k_max must be >= -1")
    # reuse a longer cached table when one exists
    return FamilyTable(which, _recursion_entries(which, k_max))


def P(which: int, k: int) -> PolyC:
    """Single family value P_{which,k}; grows the cached table on demand."""
    if k < -4:
        raise IndexError("families start at k = -4")
    size = max(DEFAULT_KMAX, k)
    return _recursion_entries(which, size)[k + 4]


def family_closed_form_odd(which: int, n: int) -> PolyC:
    """P_{which, 2n-3} from Gegenbauer Q_n^(-1/2), for which in {-1, -3}."""
    which = _check_which(which, (-1, -3))
    if n < 2:
        raise ValueError("closed form holds for n >= 2")
    q = gegenbauer(Fraction(-1, 2), n)
    numer = -C * q if which == -1 else -q
    return exact_div(numer, C * C - 1)


def _inverse_three_halves(order: int) -> LaurentSeries:
    """(1 - 2cz^2 + z^4)^(-3/2) = sum Q_n^(3/2)(c) z^(2n), trusted below z^order."""
    terms = {}
    n = 0
    while 2 * n < order:
        terms[2 * n] = gegenbauer(Fraction(3, 2), n)
        n += 1
    return LaurentSeries.from_dict(terms, order)


def family_elliptic_series(which: int, order: int = DEFAULT_SERIES_ORDER) -> LaurentSeries:
    """Generating function of P_{-4} or P_{-2} from its elliptic integral.

    The integrand is expanded term by term, integrated formally with zero
    constant and multiplied by z*sqrt(1 - 2cz^2 + z^4). The result is
    trusted below z^order.
    """
    which = _check_which(which, (-4, -2))
    if order < 1:
        raise ValueError("order must be >= 1")
    # the integral has valuation -1 (which=-4) or 1 (which=-2); the sqrt
    # factor has valuation 1, so request enough of each to cover `order`
    inner = _inverse_three_halves(order + 2)
    if which == -4:
        prefactor = LaurentSeries.polynomial({0: 4 * C, -2: -ONE})
    else:
        prefactor = LaurentSeries.polynomial({0: ONE})
    integral = (prefactor * inner).antiderivative()
    root = series_sqrt_gegenbauer(order + 2)
    return (root * integral).truncate(order)


def generating_function(which: int, order: int = DEFAULT_SERIES_ORDER) -> LaurentSeries:
    """sum_{k>=0} P_{which,k-4} z^k from the recursion, trusted below z^order."""
    which = _check_which(which)
    if order < 1:
        raise ValueError("order must be >= 1")
    table = family_by_recursion(which, max(order - 5, -1))
    terms = {k + 4: p for k, p in table.rows() if k + 4 < order}
    return LaurentSeries.from_dict(terms, order)


def ode_residual(series: LaurentSeries, which: int, order: int) -> LaurentSeries:
    """Denominator-cleared residual of the generating-function ODE.

    (z^5 - 2cz^3 + z) P' - (3z^4 - 4cz^2 + 1) P - rhs, where rhs carries the
    initial values of family ``which``. Zero to ``order`` iff ``series`` is
    the generating function of that family.
    """
    which = _check_which(which)
    series = series.truncate(order)
    init = {k: (ONE if k == which else ZERO) for k in FAMILIES}
    denom = LaurentSeries.polynomial({5: ONE, 3: -2 * C, 1: ONE})
    lin = LaurentSeries.polynomial({4: PolyC((3,)), 2: -4 * C, 0: ONE})
    rhs = LaurentSeries.polynomial(
        {
            3: 2 * (init[-1] + C * init[-3]),
            2: init[-2],
            0: -init[-4],
        }
    ) + LaurentSeries.polynomial({2: 4 * C * init[-4]})
    return denom * series.derivative() - lin * series - rhs
