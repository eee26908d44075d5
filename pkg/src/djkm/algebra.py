"""The universal central extension of sl(2) (x) R as a structure-constant algebra.

Basis: x (x) t^n and x (x) t^n u for x in {e, f, h}, plus the five central
elements w0, w-1, .., w-4. Two bracket backends are provided:

* ``closed``: the explicit relation list, with central terms read from the
  closed-form table built on the polynomial families;
* ``kassel``: ring multiplication plus the reduction of f dg, with no use of
  the families at all.

Their agreement on every basis pair is checked by verify_backend_agreement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from itertools import combinations
from typing import NamedTuple

from .exact import C, PolyC
from .parallel import run_chunks
from .ring import CentralElement, DJKMRing, RingElement

GENERATORS = ("e", "f", "h")


class Key(NamedTuple):
    """Basis key: kind in e/f/h (parity 0: t^n, parity 1: t^n u) or w (central w_n)."""

    kind: str
    parity: int
    n: int

    @property
    def central(self) -> bool:
        return self.kind == "w"

    def __str__(self):
        if self.central:
            return f"w:{self.n}"
        return f"{self.kind}{'1' if self.parity else ''}:{self.n}"

    @classmethod
    def parse(cls, text: str) -> Key:
        name, sep, idx = text.strip().partition(":")
        if not sep:
            raise ValueError(f"basis key must look like 'e:1', 'f1:-1' or 'w:0', got {text!r}")
        try:
            n = int(idx)
        except ValueError:
            raise ValueError(f"bad index in basis key {text!r}") from None
        if name == "w":
            if n not in (0, -1, -2, -3, -4):
                raise ValueError(f"central index must be in 0..-4, got {n}")
            return cls("w", 0, n)
        parity = 0
        if name.endswith("1"):
            parity, name = 1, name[:-1]
        if name not in GENERATORS:
            raise ValueError(f"unknown generator {name!r} in {text!r}")
        return cls(name, parity, n)


def central_key(j: int) -> Key:
    return Key("w", 0, j)


@dataclass(frozen=True)
class SL2Data:
    """Structure constants and invariant form of sl(2) (trace normalization)."""

    bracket: dict = field(
        default_factory=lambda: {
            ("h", "e"): {"e": 2},
            ("e", "h"): {"e": -2},
            ("h", "f"): {"f": -2},
            ("f", "h"): {"f": 2},
            ("e", "f"): {"h": 1},
            ("f", "e"): {"h": -1},
        }
    )
    form: dict = field(default_factory=lambda: {("e", "f"): 1, ("f", "e"): 1, ("h", "h"): 2})

    def br(self, x: str, y: str) -> dict:
        return self.bracket.get((x, y), {})

    def pairing(self, x: str, y: str) -> int:
        return self.form.get((x, y), 0)


SL2 = SL2Data()


class AlgebraElement:
    """Finite linear combination of basis keys."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def basis(cls, key, coeff=1) -> AlgebraElement:
        if isinstance(key, str):
            key = Key.parse(key)
        return cls({key: coeff})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return AlgebraElement(out)

    def __neg__(self):
        return AlgebraElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> AlgebraElement:
        return AlgebraElement({k: v * q for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {str(k): str(v) for k, v in self.items()}

    def __repr__(self):
        body = " + ".join(f"({v}){k}" for k, v in self.items())
        return f"AlgebraElement({body or '0'})"


def _add_into(out: dict, key: Key, coeff):
    if coeff:
        v = out.get(key, 0) + coeff
        if v:
            out[key] = v
        else:
            out.pop(key, None)


def _add_central(out: dict, z: CentralElement, scale):
    for j, v in z.items():
        _add_into(out, central_key(j), v * scale)


class DJKMAlgebra:
    """The central extension with the parameter c fixed (generic by default)."""

    def __init__(self, c=C, sl2: SL2Data = SL2):
        self.ring = DJKMRing(c)
        self.c = self.ring.c
        self.sl2 = sl2
        self._cache = {"closed": {}, "kassel": {}}

    # -- basis brackets -------------------------------------------------
    def _closed(self, a: Key, b: Key) -> dict:
        if a.central or b.central:
            return {}
        c, sl2 = self.c, self.sl2
        m, n = a.n, b.n
        xy = sl2.br(a.kind, b.kind)
        form = sl2.pairing(a.kind, b.kind)
        out: dict = {}
        if a.parity == 0 and b.parity == 0:
            for z, v in xy.items():
                _add_into(out, Key(z, 0, m + n), v)
            if form and m + n == 0:
                _add_into(out, central_key(0), n * form)
        elif a.parity == 1 and b.parity == 1:
            s = m + n
            for z, v in xy.items():
                _add_into(out, Key(z, 0, s + 4), v)
                _add_into(out, Key(z, 0, s + 2), -2 * c * v)
                _add_into(out, Key(z, 0, s), v)
            if form:
                w = 0
                if s == -4:
                    w = n + 2
                elif s == -2:
                    w = -2 * c * (n + 1)
                elif s == 0:
                    w = n
                _add_into(out, central_key(0), w * form)
        else:
            for z, v in xy.items():
                _add_into(out, Key(z, 1, m + n), v)
            if form:
                # x t^m u with y t^n gives n*psi(m+n-1); the reverse order gives -m*psi
                weight = n if a.parity == 1 else -m
                if weight:
                    _add_central(out, self.ring.psi_table(m + n - 1), weight * form)
        return out

    def _kassel(self, a: Key, b: Key) -> dict:
        if a.central or b.central:
            return {}
        ring, sl2 = self.ring, self.sl2
        f = RingElement.monomial(a.n, a.parity)
        g = RingElement.monomial(b.n, b.parity)
        fg = ring.mul(f, g)
        out: dict = {}
        for z, v in sl2.br(a.kind, b.kind).items():
            for k, parity, coeff in fg.terms():
                _add_into(out, Key(z, parity, k), v * coeff)
        form = sl2.pairing(a.kind, b.kind)
        if form:
            _add_central(out, ring.kassel_cocycle(f, g), form)
        return out

    def basis_bracket(self, a: Key, b: Key, backend: str = "closed") -> dict:
        cache = self._cache[backend]
        key = (a, b)
        hit = cache.get(key)
        if hit is None:
            hit = self._closed(a, b) if backend == "closed" else self._kassel(a, b)
            cache[key] = hit
        return hit

    def bracket(self, x: AlgebraElement, y: AlgebraElement, backend: str = "closed") -> AlgebraElement:
        out: dict = {}
        for a, u in x.terms.items():
            if a.central:
                continue
            for b, v in y.terms.items():
                if b.central:
                    continue
                uv = u * v
                for k, w in self.basis_bracket(a, b, backend).items():
                    _add_into(out, k, w * uv)
        return AlgebraElement(out)

    def bracket_closed(self, x, y) -> AlgebraElement:
        return self.bracket(x, y, "closed")

    def bracket_kassel(self, x, y) -> AlgebraElement:
        return self.bracket(x, y, "kassel")


def basis_keys(window: int, centrals: bool = True) -> list[Key]:
    keys = [Key(x, p, n) for x in GENERATORS for p in (0, 1) for n in range(-window, window + 1)]
    if centrals:
        keys += [central_key(j) for j in (0, -1, -2, -3, -4)]
    return sorted(keys)


def _report(checked: int, violations: list) -> dict:
    violations = sorted(violations, key=lambda v: v["witness"])
    return {"checked": checked, "violations": violations}


_ALGEBRAS: dict = {}


def _algebra_for(c) -> DJKMAlgebra:
    # one algebra per process and parameter, so bracket caches are shared
    alg = _ALGEBRAS.get(c)
    if alg is None:
        alg = _ALGEBRAS[c] = DJKMAlgebra(c)
    return alg


def _antisym_chunk(pairs, c=C):
    alg = _algebra_for(c)
    bad = []
    for a, b in pairs:
        ea, eb = AlgebraElement.basis(a), AlgebraElement.basis(b)
        s = alg.bracket_closed(ea, eb) + alg.bracket_closed(eb, ea)
        if s:
            bad.append({"witness": [str(a), str(b)], "residual": s.to_json()})
    return bad


def verify_antisymmetry(window: int, c=C, workers: int | None = None) -> dict:
    """[a,b] + [b,a] = 0 on all basis pairs with |n| <= window."""
    if window < 1:
        raise ValueError("window must be >= 1")
    keys = basis_keys(window)
    pairs = [(a, b) for i, a in enumerate(keys) for b in keys[i:]]
    bad = run_chunks(partial(_antisym_chunk, c=c), pairs, workers)
    return _report(len(pairs), bad)


def jacobiator(alg: DJKMAlgebra, a: Key, b: Key, c: Key, backend: str = "closed") -> AlgebraElement:
    ea, eb, ec = (AlgebraElement.basis(k) for k in (a, b, c))
    br = partial(alg.bracket, backend=backend)
    return br(ea, br(eb, ec)) + br(eb, br(ec, ea)) + br(ec, br(ea, eb))


def _jacobi_chunk(triples, c=C):
    alg = _algebra_for(c)
    bad = []
    for a, b, d in triples:
        j = jacobiator(alg, a, b, d)
        if j:
            bad.append({"witness": [str(a), str(b), str(d)], "residual": j.to_json()})
    return bad


def verify_jacobi(window: int, c=C, workers: int | None = None) -> dict:
    """Jacobi identity on all unordered triples of distinct basis vectors, |n| <= window."""
    if window < 1:
        raise ValueError("window must be >= 1")
    triples = list(combinations(basis_keys(window), 3))
    bad = run_chunks(partial(_jacobi_chunk, c=c), triples, workers)
    return _report(len(triples), bad)


def _agreement_chunk(pairs, c=C):
    alg = _algebra_for(c)
    bad = []
    for a, b in pairs:
        ea, eb = AlgebraElement.basis(a), AlgebraElement.basis(b)
        x, y = alg.bracket_closed(ea, eb), alg.bracket_kassel(ea, eb)
        if x != y:
            bad.append({"witness": [str(a), str(b)], "closed": x.to_json(), "kassel": y.to_json()})
    return bad


def verify_backend_agreement(window: int, c=C, workers: int | None = None) -> dict:
    """Closed-form and Kassel brackets agree on every ordered basis pair."""
    if window < 1:
        raise ValueError("window must be >= 1")
    keys = basis_keys(window)
    pairs = [(a, b) for a in keys for b in keys]
    bad = run_chunks(partial(_agreement_chunk, c=c), pairs, workers)
    return _report(len(pairs), bad)


def bracket_table(window: int, c=C, backend: str = "closed") -> dict:
    """All nonzero basis brackets for |n| <= window, keyed "a,b" (canonical order)."""
    alg = _algebra_for(c)
    keys = basis_keys(window, centrals=False)
    table = {}
    for a in keys:
        for b in keys:
            val = alg.bracket(AlgebraElement.basis(a), AlgebraElement.basis(b), backend)
            if val:
                table[f"{a},{b}"] = val.to_json()
    return table


