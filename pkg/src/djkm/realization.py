"""Free field realization tau: field expressions, exact mode extraction, verification.

Fields follow the expansion conventions

    alpha(z)  = sum a_n z^(-n-1),   alpha*(z)  = sum a*_n z^(-n),
    alpha1(z) = sum a1_n z^(-n-1),  alpha1*(z) = sum a1*_n z^(-n),
    beta(z)   = sum b_n z^(-n-1),   beta1(z)   = sum b1_n z^(-n-1),

and the m-th mode of a field F is the coefficient of z^(-m-1). Mode
extraction of a normal ordered product is an infinite sum over index
tuples; on a given basis term only finitely many tuples survive and
:func:`mode_apply` enumerates exactly those.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import product as iproduct
from math import inf

from .algebra import AlgebraElement, DJKMAlgebra, Key
from .fock import FockState, RealizationParams, heisenberg_term, oscillator_term
from .parallel import run_chunks

FIELD_MODES = {
    "alpha": "a",
    "alpha*": "a*",
    "alpha1": "a1",
    "alpha1*": "a1*",
    "beta": "b",
    "beta1": "b1",
}
# z-exponent of mode n is -(n + weight)
FIELD_WEIGHT = {"alpha": 1, "alpha*": 0, "alpha1": 1, "alpha1*": 0, "beta": 1, "beta1": 1}
TAU_GENERATORS = ("e", "f", "h", "e1", "f1", "h1")

# conventions fixed globally for a run; the shipped defaults pass every check
DEFAULT_CONVENTIONS = {
    "heisenberg_signs": "corrected",
    "psi_index": "reduction",
    "e1_leading_term": "normal_ordered",
}


class EnumerationError(ValueError):
    """A mode sum cannot be reduced to a finite enumeration."""


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    name: str

    def __post_init__(self):
        if self.name not in FIELD_MODES:
            raise ValueError(f"unknown field {self.name!r}")


@dataclass(frozen=True)
class Deriv:
    expr: object


@dataclass(frozen=True)
class PolyMul:
    """Multiplication by a Laurent polynomial in z, stored as ((exponent, coeff), ...)."""

    poly: tuple
    expr: object


@dataclass(frozen=True)
class NormProd:
    factors: tuple

    def __post_init__(self):
        for f in self.factors:
            _factor_info(f)


@dataclass(frozen=True)
class Prod:
    """Literal product in written order; only allowed for pairwise commuting factors."""

    factors: tuple

    def __post_init__(self):
        gens = [FIELD_MODES[_factor_info(f)[0]] for f in self.factors]
        for i, g in enumerate(gens):
            for h in gens[i + 1 :]:
                if {g, h} in ({"a", "a*"}, {"a1", "a1*"}):
                    raise ValueError("literal product of non-commuting fields is not a finite mode sum")


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class ScalarMul:
    k: object
    expr: object


def _factor_info(f):
    """(field name, derivative order) of a product factor."""
    d = 0
    while isinstance(f, Deriv):
        d += 1
        f = f.expr
    if not isinstance(f, Gen):
        raise TypeError("product factors must be fields or derivatives of fields")
    return f.name, d


def tau_field(gen: str, params: RealizationParams, conventions: dict | None = None):
    """AST of tau(gen(z)) with P(z) = z^4 - 2 c0 z^2 + 1."""
    conv = {**DEFAULT_CONVENTIONS, **(conventions or {})}
    c0, chi0 = params.c0, params.chi0
    Pz = ((4, Fraction(1)), (2, -2 * c0), (0, Fraction(1)))
    half_dP = ((3, Fraction(2)), (1, -2 * c0))
    a, a_s, a1, a1_s = Gen("alpha"), Gen("alpha*"), Gen("alpha1"), Gen("alpha1*")
    b, b1 = Gen("beta"), Gen("beta1")
    if gen == "f":
        return ScalarMul(-1, a)
    if gen == "f1":
        return ScalarMul(-1, a1)
    if gen == "h":
        return Sum((ScalarMul(2, NormProd((a, a_s))), ScalarMul(2, NormProd((a1, a1_s))), b))
    if gen == "h1":
        return Sum((ScalarMul(2, NormProd((a1, a_s))), ScalarMul(2, PolyMul(Pz, NormProd((a, a1_s)))), b1))
    if gen == "e":
        return Sum(
            (
                NormProd((a, a_s, a_s)),
                PolyMul(Pz, NormProd((a, a1_s, a1_s))),
                ScalarMul(2, NormProd((a1, a_s, a1_s))),
                NormProd((b, a_s)),
                NormProd((b1, a1_s)),
                ScalarMul(chi0, Deriv(a_s)),
            )
        )
    if gen == "e1":
        lead_cls = Prod if conv["e1_leading_term"] == "literal" else NormProd
        return Sum(
            (
                lead_cls((a1, a_s, a_s)),
                PolyMul(Pz, Sum((NormProd((a1, a1_s, a1_s)), ScalarMul(2, NormProd((a, a_s, a1_s)))))),
                NormProd((b1, a_s)),
                PolyMul(Pz, NormProd((b, a1_s))),
                ScalarMul(chi0, Sum((PolyMul(Pz, Deriv(a1_s)), PolyMul(half_dP, a1_s)))),
            )
        )
    raise ValueError(f"unknown generator {gen!r}")


# -- mode extraction ------------------------------------------------------------


def _acc(out: dict, key, coeff):
    if coeff:
        v = out.get(key, 0) + coeff
        if v:
            out[key] = v
        else:
            out.pop(key, None)


def _apply_gen_mode(field: str, n: int, terms: dict, params: RealizationParams) -> dict:
    gen = FIELD_MODES[field]
    out: dict = {}
    if gen in ("b", "b1"):
        for (mono, v), c in terms.items():
            heisenberg_term(gen, n, mono, v, c, params, out)
    else:
        r = params.r
        for (mono, v), c in terms.items():
            oscillator_term(gen, n, mono, v, c, r, out)
    return out


def is_annihilator(gen: str, n: int, r: int) -> bool:
    """Normal-ordering class of an oscillator mode (b-modes are bystanders)."""
    if gen in ("a", "a1"):
        return r == 0 and n >= 0
    if gen in ("a*", "a1*"):
        return r == 1 or n > 0
    return False


def _support(gen: str, r: int, mono: tuple):
    """(annihilation candidates, creation upper bound) of one factor on a monomial.

    The upper bound is None when the factor has no creation modes and
    ``inf`` when every index creates.
    """
    if gen in ("a", "a1", "a*", "a1*"):
        var = "x1" if gen.startswith("a1") else "x"
        present = [i for v, i, _e in mono if v == var]
        if gen in ("a", "a1"):
            if r == 1:
                return [], inf
            return sorted(i for i in present if i >= 0), -1
        if r == 1:
            return sorted(-i for i in present), None
        return sorted(-i for i in present if i < 0), 0
    if gen == "b":
        ys = [i for v, i, _e in mono if v == "y"]
        return sorted({0} | {-i for i in ys}), -1
    y1s = [i for v, i, _e in mono if v == "y1"]
    cands = {0}
    for k in y1s:
        cands |= {n for n in (-k - 4, -k - 2, -k) if n > 0}
    return sorted(cands), -1


def _falling(x: int, d: int) -> int:
    out = 1
    for j in range(d):
        out *= x - j
    return out


def enumeration_windows(factors, M: int, mono: tuple, r: int, slack: bool = False):
    """Candidate index lists per factor plus the index of the factor solved by the sum.

    Returns (candidates, solved, target) or None when the product vanishes.
    ``slack=True`` doubles every derived window; used to test soundness.
    """
    infos = [_factor_info(f) for f in factors]
    target = M + 1 - sum(FIELD_WEIGHT[name] + d for name, d in infos)
    supports = [_support(FIELD_MODES[name], r, mono) for name, _d in infos]
    for ann, up in supports:
        if not ann and up is None:
            return None
    free = [i for i, (_a, up) in enumerate(supports) if up == inf]
    if len(free) > 1:
        raise EnumerationError("more than one unbounded creation factor")
    if free:
        solved = free[0]
    else:
        # solve the factor with the widest range
        def width(i):
            ann, up = supports[i]
            return up if up is not None else (max(ann) if ann else -inf)

        solved = max(range(len(factors)), key=width)
    his = []
    for ann, up in supports:
        top = max(ann) if ann else -inf
        if up is not None:
            top = max(top, up)
        his.append(top)
    cands = []
    for i, (ann, up) in enumerate(supports):
        if i == solved:
            cands.append(None)
            continue
        vals = set(ann)
        if up is not None:
            rest = sum(h for j, h in enumerate(his) if j != i)
            if rest == inf:
                raise EnumerationError("creation range unbounded below")
            lo = target - rest
            vals |= set(range(int(lo), int(up) + 1))
        vals = sorted(vals)
        if slack and vals:
            lo, hi = vals[0], vals[-1]
            ext = (hi - lo + 2) // 2
            vals = list(range(lo - ext, hi + ext + 1))
        cands.append(vals)
    return cands, solved, target


def _apply_tuple(infos, idxs, mono, v, coeff, params: RealizationParams) -> dict:
    """Apply one normal-ordered monomial of modes to a basis term."""
    r = params.r
    scal = coeff
    for (name, d), n in zip(infos, idxs):
        if d:
            scal *= _falling(-n - FIELD_WEIGHT[name], d)
            if not scal:
                return {}
    order_b, order_ann, order_cre = [], [], []
    for (name, _d), n in zip(infos, idxs):
        gen = FIELD_MODES[name]
        if gen in ("b", "b1"):
            order_b.append((gen, n))
        elif is_annihilator(gen, n, r):
            order_ann.append((gen, n))
        else:
            order_cre.append((gen, n))
    terms = {(mono, v): scal}
    for gen, n in order_b + order_ann + order_cre:
        out: dict = {}
        if gen in ("b", "b1"):
            for (mo, vv), c in terms.items():
                heisenberg_term(gen, n, mo, vv, c, params, out)
        else:
            for (mo, vv), c in terms.items():
                oscillator_term(gen, n, mo, vv, c, r, out)
        terms = out
        if not terms:
            return terms
    return terms


# Oscillator-only products depend on r alone, so their action on a basis
# term is shared by every parameter set in the process.
_OSC_CACHE: dict = {}


def clear_caches():
    _OSC_CACHE.clear()


def _normprod_basis(factors, infos, M, mono, v, params, slack) -> dict:
    out: dict = {}
    win = enumeration_windows(factors, M, mono, params.r, slack)
    if win is None:
        return out
    cands, solved, target = win
    free_lists = [c for c in cands if c is not None]
    for choice in iproduct(*free_lists):
        idxs = list(choice)
        idxs.insert(solved, target - sum(choice))
        for key, val in _apply_tuple(infos, idxs, mono, v, 1, params).items():
            _acc(out, key, val)
    return out


def _normprod_apply(factors, M: int, terms: dict, params: RealizationParams, slack: bool) -> dict:
    infos = [_factor_info(f) for f in factors]
    shared = not slack and all(FIELD_MODES[name] not in ("b", "b1") for name, _d in infos)
    out: dict = {}
    for (mono, v), coeff in terms.items():
        if shared:
            key = (factors, M, params.r, mono, v)
            basis = _OSC_CACHE.get(key)
            if basis is None:
                basis = _OSC_CACHE[key] = _normprod_basis(factors, infos, M, mono, v, params, slack)
        else:
            basis = _normprod_basis(factors, infos, M, mono, v, params, slack)
        for k, val in basis.items():
            _acc(out, k, val * coeff)
    return out


def mode_terms(expr, M: int, terms: dict, params: RealizationParams, slack: bool = False) -> dict:
    """The M-th mode (coefficient of z^(-M-1)) of ``expr`` applied to ``terms``."""
    if not terms:
        return {}
    if isinstance(expr, Gen):
        n = M if FIELD_WEIGHT[expr.name] == 1 else M + 1
        return _apply_gen_mode(expr.name, n, terms, params)
    if isinstance(expr, ScalarMul):
        if not expr.k:
            return {}
        inner = mode_terms(expr.expr, M, terms, params, slack)
        return {k: v * expr.k for k, v in inner.items()}
    if isinstance(expr, Sum):
        out: dict = {}
        for t in expr.terms:
            for k, v in mode_terms(t, M, terms, params, slack).items():
                _acc(out, k, v)
        return out
    if isinstance(expr, PolyMul):
        out = {}
        for s, coef in expr.poly:
            if not coef:
                continue
            for k, v in mode_terms(expr.expr, M + s, terms, params, slack).items():
                _acc(out, k, v * coef)
        return out
    if isinstance(expr, Deriv):
        if M == 0:
            return {}
        inner = mode_terms(expr.expr, M - 1, terms, params, slack)
        return {k: v * (-M) for k, v in inner.items()}
    if isinstance(expr, (NormProd, Prod)):
        return _normprod_apply(expr.factors, M, terms, params, slack)
    raise TypeError(f"not a field expression: {expr!r}")


@dataclass(frozen=True)
class ModeOperator:
    expr: object
    m: int


def mode_apply(op: ModeOperator, s: FockState, params: RealizationParams, slack: bool = False) -> FockState:
    return FockState._raw(mode_terms(op.expr, op.m, s.terms, params, slack))


def normal_order_apply(factors, s: FockState, params: RealizationParams) -> FockState:
    """Apply a product of modes with creation modes left of annihilation modes.

    ``factors`` is a list of (generator, index) pairs with generators from
    a, a*, a1, a1*, b, b1.
    """
    r = params.r
    bs = [f for f in factors if f[0] in ("b", "b1")]
    osc = [f for f in factors if f[0] not in ("b", "b1")]
    ann = [f for f in osc if is_annihilator(f[0], f[1], r)]
    cre = [f for f in osc if not is_annihilator(f[0], f[1], r)]
    terms = s.terms
    for gen, n in bs + ann + cre:
        out: dict = {}
        for (mono, v), c in terms.items():
            if gen in ("b", "b1"):
                heisenberg_term(gen, n, mono, v, c, params, out)
            else:
                oscillator_term(gen, n, mono, v, c, r, out)
        terms = out
    return FockState._raw(dict(terms))


# -- the realization --------------------------------------------------------------


def generator_key(gen: str, m: int) -> Key:
    return Key(gen[0], 1 if gen.endswith("1") else 0, m)


class Realization:
    """tau for one parameter set, with per-basis-term caching of mode actions."""

    def __init__(self, params: RealizationParams, conventions: dict | None = None):
        self.params = params
        self.conventions = {**DEFAULT_CONVENTIONS, **(conventions or {})}
        if self.conventions["heisenberg_signs"] != "corrected":
            raise ValueError("only the corrected Heisenberg representation is implemented")
        if self.conventions["psi_index"] != "reduction":
            raise ValueError("only the reduction-derived psi index convention is implemented")
        self.fields = {g: tau_field(g, params, self.conventions) for g in TAU_GENERATORS}
        self.algebra = DJKMAlgebra(params.c0)
        self._cache: dict = {}

    def _basis_apply(self, gen: str, m: int, term) -> dict:
        key = (gen, m, term)
        hit = self._cache.get(key)
        if hit is None:
            hit = mode_terms(self.fields[gen], m, {term: 1}, self.params)
            self._cache[key] = hit
        return hit

    def apply_terms(self, gen: str, m: int, terms: dict) -> dict:
        out: dict = {}
        for term, c in terms.items():
            for k, v in self._basis_apply(gen, m, term).items():
                _acc(out, k, v * c)
        return out

    def tau_apply(self, gen: str, m: int, s: FockState) -> FockState:
        return FockState._raw(self.apply_terms(gen, m, s.terms))

    def central_apply(self, j: int, s: FockState) -> FockState:
        """tau(w0) = chi0, tau(w_-k) = 0."""
        return s.scale(self.params.chi0) if j == 0 else FockState()

    def element_apply(self, x: AlgebraElement, terms: dict) -> dict:
        out: dict = {}
        for key, coeff in x.terms.items():
            if key.central:
                if key.n == 0:
                    for t, c in terms.items():
                        _acc(out, t, c * coeff * self.params.chi0)
                continue
            gen = key.kind + ("1" if key.parity else "")
            for t, c in self.apply_terms(gen, key.n, terms).items():
                _acc(out, t, c * coeff)
        return out

    def residual_terms(self, X: str, m: int, Y: str, n: int, terms: dict) -> dict:
        ys = self.apply_terms(Y, n, terms)
        xs = self.apply_terms(X, m, terms)
        out = self.apply_terms(X, m, ys)
        for k, v in self.apply_terms(Y, n, xs).items():
            _acc(out, k, -v)
        br = self.algebra.bracket_closed(
            AlgebraElement.basis(generator_key(X, m)), AlgebraElement.basis(generator_key(Y, n))
        )
        for k, v in self.element_apply(br, terms).items():
            _acc(out, k, -v)
        return out

    def check_commutator(self, X: str, m: int, Y: str, n: int, s: FockState) -> FockState:
        return FockState._raw(self.residual_terms(X, m, Y, n, s.terms))


def tau_apply(gen: str, m: int, s: FockState, params: RealizationParams) -> FockState:
    return Realization(params).tau_apply(gen, m, s)


def check_commutator(X: str, m: int, Y: str, n: int, s: FockState, params: RealizationParams) -> FockState:
    return Realization(params).check_commutator(X, m, Y, n, s)


# -- sweeps -----------------------------------------------------------------------


def generator_pairs():
    """The 21 unordered generator pairs."""
    out = []
    for i, x in enumerate(TAU_GENERATORS):
        for y in TAU_GENERATORS[i:]:
            out.append((x, y))
    return out


def default_states() -> list[FockState]:
    """Vacuum (x) v0, vacuum (x) v1, x_-1, x1_0 y_-2 (x) v1 and a fixed degree-3 monomial."""
    return [
        FockState.vacuum(0),
        FockState.vacuum(1),
        FockState.monomial([("x", -1, 1)], 0),
        FockState.monomial([("x1", 0, 1), ("y", -2, 1)], 1),
        pseudo_random_monomial(seed=0, degree=3),
    ]


def pseudo_random_monomial(seed: int, degree: int = 3, span: int = 3) -> FockState:
    import random

    rng = random.Random(seed)
    factors = []
    for _ in range(degree):
        var = rng.choice(("x", "x1", "y", "y1"))
        idx = rng.randint(-span, -1) if var.startswith("y") else rng.randint(-span, span)
        factors.append((var, idx, 1))
    return FockState.monomial(factors, rng.randint(0, 1))


def default_params_list(c0s=None) -> list[RealizationParams]:
    c0s = c0s or [Fraction(2), Fraction(3, 5), Fraction(-7, 3)]
    out = []
    for c0 in c0s:
        for kappa0 in (0, 1, -4):
            for lam, mu, nu, vk in ((5, 1, 2, 3), (0, 0, 0, 0)):
                for r in (0, 1):
                    out.append(RealizationParams(c0, r, kappa0, lam, mu, nu, vk))
    return out


def _params_task(task, window: int, states_json: list, conventions: dict | None):
    params_idx, params = task
    states = [FockState.from_json(s) for s in states_json]
    real = Realization(params, conventions)
    checked = 0
    bad = []
    rng = range(-window, window + 1)
    for X, Y in generator_pairs():
        for m in rng:
            for n in rng:
                for s_idx, s in enumerate(states):
                    checked += 1
                    res = real.residual_terms(X, m, Y, n, s.terms)
                    if res:
                        bad.append(
                            {
                                "witness": [params_idx, X, m, Y, n, s_idx],
                                "params": params.to_json(),
                                "residual": FockState._raw(res).to_json(),
                            }
                        )
    return checked, bad


def _params_chunk(tasks, window, states_json, conventions):
    return [_params_task(t, window, states_json, conventions) for t in tasks]


def verify_realization(
    window: int,
    states=None,
    params_list=None,
    conventions: dict | None = None,
    workers: int | None = None,
) -> dict:
    """Run every commutator check; report counts and residual witnesses."""
    states = default_states() if states is None else list(states)
    params_list = default_params_list() if params_list is None else list(params_list)
    states_json = [s.to_json() for s in states]
    tasks = list(enumerate(params_list))
    fn = partial(_params_chunk, window=window, states_json=states_json, conventions=conventions)
    results = run_chunks(fn, tasks, workers, chunks_per_worker=1)
    checked = sum(c for c, _ in results)
    bad = [b for _, bs in results for b in bs]
    bad.sort(key=lambda b: b["witness"])
    return {
        "checked": checked,
        "violations": bad,
        "minimal_witness": bad[0] if bad else None,
        "conventions": {**DEFAULT_CONVENTIONS, **(conventions or {})},
    }


def weight(mono: tuple, r: int) -> int:
    """Mode weight of a monomial: a_n, a*_n, b_n, b1_n with n < 0 raise it by -n."""
    w = 0
    for var, idx, e in mono:
        if var in ("x", "x1") and r == 0:
            w += abs(idx) * e
        else:
            w += -idx * e
    return w
