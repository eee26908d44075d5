"""Polynomial Fock space C[x] (x) C[y] (x) V with oscillator and Heisenberg actions.

A state is a finite sum of ``coeff * monomial (x) v_i``. Monomials are
sorted tuples of ``(var, index, exponent)`` with ``var`` one of
``x, x1, y, y1``; ``v`` is 0 or 1. All coefficients are Fractions at a
specialized value c0 of the parameter.

The beta-gamma modes a, a*, a1, a1* act by the two representations rho_0
and rho_1. The DJKM Heisenberg modes b, b1 act by a sign-corrected version
of the printed representation; every correction is listed in
``data/rhorep_corrections.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import NamedTuple

from .exact import parse_rational

OSC_GENERATORS = ("a", "a*", "a1", "a1*")
HEIS_GENERATORS = ("b", "b1")
VARIABLES = ("x", "x1", "y", "y1")


class WrongFamily(ValueError):
    """A mode was passed to the action of the other family."""


class ModeKey(NamedTuple):
    generator: str
    n: int


@dataclass(frozen=True)
class RealizationParams:
    c0: Fraction = Fraction(2)
    r: int = 0
    kappa0: Fraction = Fraction(0)
    lam: Fraction = Fraction(0)
    mu: Fraction = Fraction(0)
    nu: Fraction = Fraction(0)
    varkappa: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "kappa0", "lam", "mu", "nu", "varkappa"):
            object.__setattr__(self, name, parse_rational(getattr(self, name)))
        if self.r not in (0, 1):
            raise ValueError("r must be 0 or 1")
        if self.c0 * self.c0 == 1:
            raise ValueError("c0 must not be +-1")

    @property
    def chi0(self) -> Fraction:
        """Total central charge: the Heisenberg part plus 4 from normal ordering when r = 0."""
        return self.kappa0 + (4 if self.r == 0 else 0)

    def to_json(self) -> dict:
        return {
            "c0": str(self.c0),
            "r": self.r,
            "kappa0": str(self.kappa0),
            "lambda": str(self.lam),
            "mu": str(self.mu),
            "nu": str(self.nu),
            "varkappa": str(self.varkappa),
            "chi0": str(self.chi0),
        }


# -- monomials --------------------------------------------------------------


def mono_mul(mono: tuple, var: str, idx: int) -> tuple:
    out = []
    done = False
    for v, i, e in mono:
        if not done and (v, i) >= (var, idx):
            if (v, i) == (var, idx):
                out.append((v, i, e + 1))
                done = True
                continue
            out.append((var, idx, 1))
            done = True
        out.append((v, i, e))
    if not done:
        out.append((var, idx, 1))
    return tuple(out)


def mono_diff(mono: tuple, var: str, idx: int):
    """Return (exponent, monomial with that exponent lowered) or None."""
    for pos, (v, i, e) in enumerate(mono):
        if v == var and i == idx:
            if e == 1:
                return e, mono[:pos] + mono[pos + 1 :]
            return e, mono[:pos] + ((v, i, e - 1),) + mono[pos + 1 :]
    return None


def mono_degree(mono: tuple) -> int:
    return sum(e for _, _, e in mono)


def mono_vars(mono: tuple, var: str):
    return [i for v, i, _ in mono if v == var]


class FockState:
    """Immutable finite combination ``{(monomial, v): Fraction}``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> FockState:
        st = cls.__new__(cls)
        st.terms = terms
        return st

    @classmethod
    def vacuum(cls, v: int = 0) -> FockState:
        return cls({((), v): 1})

    @classmethod
    def monomial(cls, factors, v: int = 0, coeff=1) -> FockState:
        """``factors``: iterable of (var, index, exponent)."""
        mono = ()
        for var, idx, e in factors:
            if var not in VARIABLES:
                raise ValueError(f"unknown variable {var!r}")
            if var in ("y", "y1") and idx >= 0:
                raise ValueError("y-variables carry negative indices only")
            for _ in range(e):
                mono = mono_mul(mono, var, idx)
        return cls({(mono, v): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FockState):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return FockState._raw(out)

    def __neg__(self):
        return FockState._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> FockState:
        if not q:
            return FockState()
        return FockState._raw({k: c * q for k, c in self.terms.items()})

    def items(self):
        return sorted(self.terms.items())

    def variables(self) -> set:
        return {(v, i) for (mono, _), _c in self.terms.items() for v, i, _e in mono}

    def to_json(self) -> list:
        out = []
        for (mono, v), c in self.items():
            out.append(
                {
                    "monomial": [[var, idx, e] for var, idx, e in mono],
                    "v": v,
                    "coeff": [c.numerator, c.denominator],
                }
            )
        return out

    @classmethod
    def from_json(cls, data: list) -> FockState:
        st = cls()
        for row in data:
            num, den = row.get("coeff", [1, 1])
            st = st + cls.monomial([tuple(f) for f in row["monomial"]], int(row.get("v", 0)), Fraction(num, den))
        return st

    def __repr__(self):
        parts = []
        for (mono, v), c in self.items():
            m = "*".join(f"{var}[{i}]" + (f"^{e}" if e > 1 else "") for var, i, e in mono) or "1"
            parts.append(f"({c}){m}|v{v}>")
        return "FockState(" + (" + ".join(parts) or "0") + ")"


# -- elementary operators -----------------------------------------------------
# Each returns a dict {(mono, v): coeff} for a single basis term.


def _mult(mono, v, coeff, var, idx, out):
    key = (mono_mul(mono, var, idx), v)
    val = out.get(key, 0) + coeff
    if val:
        out[key] = val
    else:
        out.pop(key, None)


def _diff(mono, v, coeff, var, idx, out):
    hit = mono_diff(mono, var, idx)
    if hit is None:
        return
    e, m2 = hit
    key = (m2, v)
    val = out.get(key, 0) + coeff * e
    if val:
        out[key] = val
    else:
        out.pop(key, None)


def _add(out, key, coeff):
    if coeff:
        val = out.get(key, 0) + coeff
        if val:
            out[key] = val
        else:
            out.pop(key, None)


def oscillator_term(gen: str, n: int, mono, v, coeff, r: int, out: dict):
    """Accumulate rho_r(gen_n) applied to coeff * mono (x) v into ``out``."""
    var = "x1" if gen.startswith("a1") else "x"
    if gen in ("a", "a1"):
        if r == 0 and n >= 0:
            _diff(mono, v, coeff, var, n, out)
        else:
            _mult(mono, v, coeff, var, n, out)
    elif gen in ("a*", "a1*"):
        if r == 0 and n <= 0:
            _mult(mono, v, coeff, var, -n, out)
        else:
            _diff(mono, v, -coeff, var, -n, out)
    else:
        raise WrongFamily(f"{gen} is not a beta-gamma generator")


def heisenberg_term(gen: str, n: int, mono, v, coeff, params: RealizationParams, out: dict):
    """Accumulate the (sign-corrected) Heisenberg action into ``out``."""
    k = params.kappa0
    c0 = params.c0
    if gen == "b":
        if n < 0:
            _mult(mono, v, coeff, "y", n, out)
        elif n == 0:
            _add(out, (mono, v), coeff * params.lam)
        elif k:
            _diff(mono, v, coeff * (-2 * n) * k, "y", -n, out)
    elif gen == "b1":
        if n < 0:
            _mult(mono, v, coeff, "y1", n, out)
            if k and n == -1:
                _diff(mono, v, -coeff * k, "y1", -3, out)
            elif k and n == -3:
                _diff(mono, v, coeff * k, "y1", -1, out)
        elif n == 0:
            if k:
                _diff(mono, v, coeff * (-4) * k, "y1", -4, out)
                _diff(mono, v, coeff * 4 * c0 * k, "y1", -2, out)
            # B^1_0 on V: v0 -> mu v0 + nu v1, v1 -> varkappa v0 + mu v1
            if v == 0:
                _add(out, (mono, 0), coeff * params.mu)
                _add(out, (mono, 1), coeff * params.nu)
            else:
                _add(out, (mono, 0), coeff * params.varkappa)
                _add(out, (mono, 1), coeff * params.mu)
        elif k:
            _diff(mono, v, coeff * (-2) * (n + 2) * k, "y1", -n - 4, out)
            _diff(mono, v, coeff * 4 * c0 * (n + 1) * k, "y1", -n - 2, out)
            _diff(mono, v, coeff * (-2) * n * k, "y1", -n, out)
    else:
        raise WrongFamily(f"{gen} is not a Heisenberg generator")


def apply_mode_terms(gen: str, n: int, terms: dict, params: RealizationParams) -> dict:
    out: dict = {}
    if gen in OSC_GENERATORS:
        r = params.r
        for (mono, v), c in terms.items():
            oscillator_term(gen, n, mono, v, c, r, out)
    else:
        for (mono, v), c in terms.items():
            heisenberg_term(gen, n, mono, v, c, params, out)
    return out


def apply_oscillator(mode, s: FockState, params: RealizationParams) -> FockState:
    gen, n = mode
    if gen not in OSC_GENERATORS:
        raise WrongFamily(f"{gen} is not a beta-gamma generator")
    return FockState._raw(apply_mode_terms(gen, n, s.terms, params))


def apply_heisenberg(mode, s: FockState, params: RealizationParams) -> FockState:
    gen, n = mode
    if gen not in HEIS_GENERATORS:
        raise WrongFamily(f"{gen} is not a Heisenberg generator")
    return FockState._raw(apply_mode_terms(gen, n, s.terms, params))


def apply_mode(mode, s: FockState, params: RealizationParams) -> FockState:
    gen, n = mode
    if gen in OSC_GENERATORS:
        return apply_oscillator(mode, s, params)
    return apply_heisenberg(mode, s, params)


def commutator(m1, m2, s: FockState, params: RealizationParams) -> FockState:
    return apply_mode(m1, apply_mode(m2, s, params), params) - apply_mode(m2, apply_mode(m1, s, params), params)


# -- relation checks ------------------------------------------------------------


def heisenberg_expected(g1: str, m: int, g2: str, n: int, params: RealizationParams) -> Fraction:
    """Scalar the commutator [g1_m, g2_n] must act by, with 1_0 -> kappa0 and 1_-k, psi' -> 0."""
    k, c0 = params.kappa0, params.c0
    if g1 == "b" and g2 == "b":
        return -2 * m * k if m + n == 0 else Fraction(0)
    if g1 == "b1" and g2 == "b1":
        s = m + n
        w = Fraction(0)
        if s == -4:
            w = Fraction(n + 2)
        elif s == -2:
            w = -2 * c0 * (n + 1)
        elif s == 0:
            w = Fraction(n)
        return 2 * w * k
    return Fraction(0)


def heisenberg_relation_check(m: int, n: int, test_states, params: RealizationParams) -> dict:
    """Check all four Heisenberg relations for the index pair (m, n)."""
    checked, bad = 0, []
    for g1 in HEIS_GENERATORS:
        for g2 in HEIS_GENERATORS:
            want = heisenberg_expected(g1, m, g2, n, params)
            for idx, s in enumerate(test_states):
                checked += 1
                res = commutator((g1, m), (g2, n), s, params) - s.scale(want)
                if res:
                    bad.append({"witness": [f"{g1}:{m}", f"{g2}:{n}", idx], "residual": repr(res)})
    return {"checked": checked, "violations": bad}


def oscillator_relation_check(m: int, n: int, test_states, params: RealizationParams) -> dict:
    """[a_m, a*_n] = [a1_m, a1*_n] = delta_{m+n,0}; all other pairs commute."""
    checked, bad = 0, []
    for g1 in OSC_GENERATORS:
        for g2 in OSC_GENERATORS:
            pair = {g1, g2}
            want = 0
            if m + n == 0 and pair in ({"a", "a*"}, {"a1", "a1*"}) and g1 != g2:
                want = 1 if g1 in ("a", "a1") else -1
            for idx, s in enumerate(test_states):
                checked += 1
                res = commutator((g1, m), (g2, n), s, params) - s.scale(want)
                if res:
                    bad.append({"witness": [f"{g1}:{m}", f"{g2}:{n}", idx], "residual": repr(res)})
    return {"checked": checked, "violations": bad}


def corrections_ledger() -> list:
    """Machine-readable list of deviations from the printed Heisenberg representation."""
    text = resources.files("djkm").joinpath("data/rhorep_corrections.json").read_text()
    return json.loads(text)
