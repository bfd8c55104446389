"""Polynomial differential forms on simplices and the Dupont contraction.

Forms on the n-simplex live in reduced coordinates t_1..t_n (t_0 = 1 - sum t_i,
dt_0 = -sum dt_i). A form is a dict ``{(exponents, dt_indices): coefficient}``
with sorted, repetition-free ``dt_indices``; dt_i has homological degree -1.
Cochains are dicts ``{I: coefficient}`` over nonempty sorted tuples I of
vertices, with omega_I in degree -(|I| - 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

Poly = Dict[tuple, Fraction]
Cochain = Dict[tuple, Fraction]


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class PolyForm:
    n: int
    terms: Tuple[Tuple[tuple, tuple, Fraction], ...]

    # construction ----------------------------------------------------------
    @staticmethod
    def from_dict(n: int, d: Mapping) -> "PolyForm":
        items = sorted((e, J, Fraction(c)) for (e, J), c in d.items() if c)
        return PolyForm(n, tuple(items))

    def as_dict(self) -> Dict[tuple, Fraction]:
        return {(e, J): c for e, J, c in self.terms}

    @staticmethod
    def zero(n: int) -> "PolyForm":
        return PolyForm(n, ())

    @staticmethod
    def one(n: int) -> "PolyForm":
        return PolyForm(n, (((0,) * n, (), Fraction(1)),))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {-len(J) for _, J, _ in self.terms}

    def poly_degree(self) -> int:
        return max((sum(e) for e, _, _ in self.terms), default=0)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other: "PolyForm") -> "PolyForm":
        _same(self, other)
        d = self.as_dict()
        for e, J, c in other.terms:
            d[(e, J)] = d.get((e, J), 0) + c
        return PolyForm.from_dict(self.n, d)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.n, tuple((e, J, -c) for e, J, c in self.terms))

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, a) -> "PolyForm":
        a = Fraction(a)
        if not a:
            return PolyForm.zero(self.n)
        return PolyForm(self.n, tuple((e, J, c * a) for e, J, c in self.terms))

    def __mul__(self, other: "PolyForm") -> "PolyForm":
        return wedge_product(self.n, [self, other])

    def part(self, deg: int) -> "PolyForm":
        return PolyForm(self.n, tuple(t for t in self.terms if -len(t[1]) == deg))

    def __str__(self) -> str:
        return render(self)


def _same(a: PolyForm, b: PolyForm) -> None:
    if a.n != b.n:
        raise FormError(f"dimension mismatch: {a.n} vs {b.n}")


def _merge(J: tuple, K: tuple) -> tuple:
    """Wedge dt_J ^ dt_K: (sorted indices, sign) or None when a dt repeats."""
    if set(J) & set(K):
        return None
    sign = 1
    for k in K:
        # number of elements of J larger than k that k has to pass
        if sum(1 for j in J if j > k) % 2:
            sign = -sign
    return tuple(sorted(J + K)), sign


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def wedge_product(n: int, forms: Sequence[PolyForm]) -> PolyForm:
    """Graded commutative product; the empty product is 1."""
    out: Dict[tuple, Fraction] = {((0,) * n, ()): Fraction(1)}
    for f in forms:
        if f.n != n:
            raise FormError(f"dimension mismatch: {f.n} vs {n}")
        nxt: Dict[tuple, Fraction] = {}
        for (e1, J1), c1 in out.items():
            for e2, J2, c2 in f.terms:
                m = _merge(J1, J2)
                if m is None:
                    continue
                J, s = m
                k = (_add_exp(e1, e2), J)
                nxt[k] = nxt.get(k, 0) + s * c1 * c2
        out = {k: v for k, v in nxt.items() if v}
    return PolyForm.from_dict(n, out)


# ------------------------------------------------------------------ generators

def t(n: int, i: int) -> PolyForm:
    if i == 0:
        d = {((0,) * n, ()): Fraction(1)}
        for j in range(1, n + 1):
            d[(_unit(n, j), ())] = Fraction(-1)
        return PolyForm.from_dict(n, d)
    if not 1 <= i <= n:
        raise FormError(f"no coordinate t_{i} on the {n}-simplex")
    return PolyForm.from_dict(n, {(_unit(n, i), ()): 1})


def dt(n: int, i: int) -> PolyForm:
    if i == 0:
        return PolyForm.from_dict(n, {((0,) * n, (j,)): -1 for j in range(1, n + 1)})
    if not 1 <= i <= n:
        raise FormError(f"no coordinate t_{i} on the {n}-simplex")
    return PolyForm.from_dict(n, {((0,) * n, (i,)): 1})


def _unit(n: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(1, n + 1))


def const(n: int, c) -> PolyForm:
    return PolyForm.one(n).scale(c)


def monomial(n: int, exps: Sequence[int], dts: Sequence[int] = ()) -> PolyForm:
    """t^exps dt_{dts[0]} ^ dt_{dts[1]} ^ ... with internal indices 1..n."""
    f = PolyForm.from_dict(n, {(tuple(exps), ()): 1})
    return wedge_product(n, [f] + [dt(n, j) for j in dts])


def d(sigma: PolyForm) -> PolyForm:
    """de Rham differential (homological degree -1)."""
    n = sigma.n
    out: Dict[tuple, Fraction] = {}
    for e, J, c in sigma.terms:
        for i in range(1, n + 1):
            a = e[i - 1]
            if not a or i in J:
                continue
            m = _merge((i,), J)
            if m is None:
                continue
            K, s = m
            e2 = tuple(x - 1 if j == i - 1 else x for j, x in enumerate(e))
            k = (e2, K)
            out[k] = out.get(k, 0) + s * a * c
    return PolyForm.from_dict(n, out)


# --------------------------------------------------------------- Whitney forms

def _check_subset(n: int, I: Iterable[int]) -> tuple:
    I = tuple(sorted(set(I)))
    if not I:
        raise FormError("empty vertex set")
    if I[0] < 0 or I[-1] > n:
        raise FormError(f"vertex set {I} out of range for the {n}-simplex")
    return I


@lru_cache(maxsize=None)
def whitney(n: int, I: tuple) -> PolyForm:
    """k! sum_j (-1)^j t_{i_j} dt_{i_0} .. (omit j) .. dt_{i_k}."""
    I = _check_subset(n, I)
    k = len(I) - 1
    out = PolyForm.zero(n)
    for j, ij in enumerate(I):
        fs = [t(n, ij)] + [dt(n, i) for i in I if i != ij]
        term = wedge_product(n, fs)
        out = out + (term if j % 2 == 0 else -term)
    return out.scale(factorial(k))


def include(n: int, c: Mapping) -> PolyForm:
    """i_n: cochains -> forms."""
    out = PolyForm.zero(n)
    for I, a in sorted(c.items()):
        if a:
            out = out + whitney(n, tuple(I)).scale(a)
    return out


def subsets(n: int) -> List[tuple]:
    return [I for k in range(1, n + 2) for I in combinations(range(n + 1), k)]


# ---------------------------------------------------------------- pullbacks

def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            k = _add_exp(e1, e2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _partial(p: Poly, i: int) -> Poly:
    out: Poly = {}
    for e, c in p.items():
        if e[i]:
            e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
            out[e2] = out.get(e2, 0) + c * e[i]
    return out


def pullback(sigma: PolyForm, m: int, images: Sequence[Poly]) -> Dict[tuple, Fraction]:
    """Pull back along the polynomial map whose t_j-image is ``images[j-1]``.

    Images are polynomials in m variables; the result is a raw form dict in
    those m variables (indices 1..m for differentials).
    """
    zero = (0,) * m
    # d(image_j) = sum_i (d image_j / d x_i) dx_i
    dimg = []
    for p in images:
        dimg.append({i + 1: q for i in range(m) for q in [_partial(p, i)] if q})
    powcache: Dict[tuple, Poly] = {}

    def power(j: int, a: int) -> Poly:
        kk = (j, a)
        if kk not in powcache:
            if a == 0:
                powcache[kk] = {zero: Fraction(1)}
            else:
                powcache[kk] = _poly_mul(power(j, a - 1), images[j])
        return powcache[kk]

    out: Dict[tuple, Fraction] = {}
    for e, J, c in sigma.terms:
        poly: Poly = {zero: c}
        for j, a in enumerate(e):
            if a:
                poly = _poly_mul(poly, power(j, a))
                if not poly:
                    break
        if not poly:
            continue
        dts: Dict[tuple, Poly] = {(): poly}
        for j in J:
            nxt: Dict[tuple, Poly] = {}
            for K, a in dts.items():
                for i, b in dimg[j - 1].items():
                    mm = _merge(K, (i,))
                    if mm is None:
                        continue
                    K2, sgn = mm
                    prod = _poly_mul(a, b)
                    acc = nxt.setdefault(K2, {})
                    for pe, pc in prod.items():
                        acc[pe] = acc.get(pe, 0) + sgn * pc
            dts = {k: {e2: v for e2, v in q.items() if v} for k, q in nxt.items()}
            dts = {k: q for k, q in dts.items() if q}
        for K, q in dts.items():
            for pe, pc in q.items():
                kk = (pe, K)
                out[kk] = out.get(kk, 0) + pc
    return {k: v for k, v in out.items() if v}


def _var(m: int, i: int) -> Poly:
    return {tuple(1 if j == i else 0 for j in range(m)): Fraction(1)}


def _affine(m: int, const_: Fraction, lin: Mapping[int, Fraction]) -> Poly:
    p: Poly = {}
    if const_:
        p[(0,) * m] = Fraction(const_)
    for i, c in lin.items():
        if c:
            p[tuple(1 if j == i else 0 for j in range(m))] = Fraction(c)
    return p


def face_images(n: int, I: tuple) -> List[Poly]:
    """Images of t_1..t_n under the inclusion of the face I = (i_0 < .. < i_k).

    The face is parametrized by s_l = t_{i_l}, l = 1..k, with t_{i_0} = 1 - sum s.
    """
    k = len(I) - 1
    images: List[Poly] = []
    for j in range(1, n + 1):
        if j in I[1:]:
            images.append(_affine(k, 0, {I.index(j) - 1: 1}))
        elif j == I[0]:
            images.append(_affine(k, 1, {l: -1 for l in range(k)}))
        else:
            images.append({})
    return images


def _simplex_integral(e: tuple) -> Fraction:
    # integral of s^e over {s >= 0, sum s <= 1}
    num = 1
    for a in e:
        num *= factorial(a)
    return Fraction(num, factorial(sum(e) + len(e)))


def elementary_projection(n: int, sigma: PolyForm) -> Cochain:
    """p_n: integrate over every face (vertex evaluation in degree 0)."""
    if sigma.n != n:
        raise FormError("dimension mismatch")
    out: Cochain = {}
    for I in subsets(n):
        k = len(I) - 1
        part = sigma.part(-k)
        if part.is_zero():
            continue
        pulled = pullback(part, k, face_images(n, I))
        top = tuple(range(1, k + 1))
        val = Fraction(0)
        for (e, K), c in pulled.items():
            if K == top:
                val += c * _simplex_integral(e)
        if val:
            out[I] = val
    return out


# -------------------------------------------------------------- homotopies

def _cone_images(n: int, i: int) -> List[Poly]:
    """phi_i(u, x) = u x + (1 - u) e_i in variables (t_1..t_n, u)."""
    m = n + 1
    images = []
    for j in range(1, n + 1):
        p = _poly_mul(_var(m, j - 1), _var(m, n))
        if j == i:
            p = dict(p)
            one = (0,) * m
            p[one] = p.get(one, 0) + 1
            uu = _var(m, n)
            for k2, v in uu.items():
                p[k2] = p.get(k2, 0) - v
            p = {k2: v for k2, v in p.items() if v}
        images.append(p)
    return images


@lru_cache(maxsize=None)
def _poincare_mono(n: int, i: int, e: tuple, J: tuple) -> PolyForm:
    sigma = PolyForm(n, ((e, J, Fraction(1)),))
    pulled = pullback(sigma, n + 1, _cone_images(n, i))
    u = n + 1
    out: Dict[tuple, Fraction] = {}
    for (e2, K), c in pulled.items():
        if not K or K[-1] != u:
            continue
        sign = -1 if (len(K) - 1) % 2 else 1
        a = e2[n]
        kk = (e2[:n], K[:-1])
        out[kk] = out.get(kk, 0) + sign * c * Fraction(1, a + 1)
    return PolyForm.from_dict(n, out)


def _linear(n: int, sigma: PolyForm, f) -> PolyForm:
    acc: Dict[tuple, Fraction] = {}
    for e, J, c in sigma.terms:
        for e2, J2, c2 in f(e, J).terms:
            acc[(e2, J2)] = acc.get((e2, J2), 0) + c * c2
    return PolyForm.from_dict(n, acc)


def poincare(n: int, i: int, sigma: PolyForm) -> PolyForm:
    """Contraction toward vertex i: integrate the du-component of phi_i^* over u."""
    return _linear(n, sigma, lambda e, J: _poincare_mono(n, i, e, J))


@lru_cache(maxsize=None)
def _dupont_mono(n: int, e: tuple, J: tuple) -> PolyForm:
    sigma = PolyForm(n, ((e, J, Fraction(1)),))
    out = PolyForm.zero(n)
    cache: Dict[tuple, PolyForm] = {(): sigma}

    def chain(I: tuple) -> PolyForm:
        if I not in cache:
            cache[I] = poincare(n, I[-1], chain(I[:-1]))
        return cache[I]

    for k in range(1, n + 1):
        for I in combinations(range(n + 1), k):
            c = chain(I)
            if c.is_zero():
                continue
            term = wedge_product(n, [whitney(n, I), c])
            out = out - term if k % 2 else out + term
    return out


def dupont_homotopy(n: int, sigma: PolyForm, scale=1) -> PolyForm:
    """h_n = sum_I (-1)^|I| omega_I ^ h_{i_k} .. h_{i_0} over |I| <= n.

    ``scale`` multiplies the result; it exists only for negative controls.
    """
    if sigma.n != n:
        raise FormError("dimension mismatch")
    if n == 0 or sigma.is_zero():
        return PolyForm.zero(n)
    return _linear(n, sigma, lambda e, J: _dupont_mono(n, e, J)).scale(scale)


# ------------------------------------------------------------------ rendering

def render(sigma: PolyForm) -> str:
    if sigma.is_zero():
        return "0"
    parts = []
    for e, J, c in sigma.terms:
        fac = []
        for i, a in enumerate(e, start=1):
            if a == 1:
                fac.append(f"t{i}")
            elif a > 1:
                fac.append(f"t{i}^{a}")
        fac += [f"dt{j}" for j in J]
        body = "*".join(fac)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


# ------------------------------------------------------------- face maps

def coface_images(n: int, j: int) -> List[Poly]:
    """Images of t_1..t_n of the n-simplex along the j-th coface from n-1."""
    m = n - 1
    out: List[Poly] = []
    for i in range(1, n + 1):
        if i == j:
            out.append({})
            continue
        src = i if i < j else i - 1
        if src == 0:
            out.append(_affine(m, 1, {l: -1 for l in range(m)}))
        else:
            out.append(_affine(m, 0, {src - 1: 1}))
    return out


def face_form(n: int, j: int, sigma: PolyForm) -> PolyForm:
    """Restriction of a form on the n-simplex to its j-th face."""
    if not 0 <= j <= n or n < 1:
        raise FormError(f"no face {j} of the {n}-simplex")
    return PolyForm.from_dict(n - 1, pullback(sigma, n - 1, coface_images(n, j)))


def face_cochain(n: int, j: int, c: Mapping) -> Cochain:
    def up(v: int) -> int:
        return v if v < j else v + 1

    out: Cochain = {}
    for I in subsets(n - 1):
        v = c.get(tuple(up(x) for x in I), 0)
        if v:
            out[I] = Fraction(v)
    return out


def cochain_differential(n: int, c: Mapping) -> Cochain:
    """Dual of the simplicial boundary, matching d on Whitney forms."""
    out: Cochain = {}
    for I, a in c.items():
        if not a:
            continue
        for v in range(n + 1):
            if v in I:
                continue
            J = tuple(sorted(I + (v,)))
            pos = J.index(v)
            s = -1 if pos % 2 else 1
            out[J] = out.get(J, 0) + s * a
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------- verification

def basis_forms(n: int, max_degree: int) -> Iterable[PolyForm]:
    """Monomial forms t^e dt_J with |e| <= max_degree."""
    def exps(k: int, total: int):
        if k == 0:
            yield ()
            return
        for a in range(total + 1):
            for rest in exps(k - 1, total - a):
                yield (a,) + rest

    for e in exps(n, max_degree):
        for r in range(n + 1):
            for J in combinations(range(1, n + 1), r):
                yield PolyForm.from_dict(n, {(e, J): 1})


class ContractionReport(dict):
    """Identity name -> pass flag; ``counterexamples`` holds the first failing input per identity."""

    def __init__(self, names):
        super().__init__((k, True) for k in names)
        self.counterexamples: Dict[str, str] = {}

    def fail(self, name: str, witness) -> None:
        if self[name]:
            self[name] = False
            self.counterexamples[name] = witness if isinstance(witness, str) else render(witness)

    @property
    def ok(self) -> bool:
        return all(self.values())


def verify_contraction(n: int, max_degree: int = 6, scale=1) -> ContractionReport:
    """Check the contraction identities on all monomials up to ``max_degree``.

    ``scale`` rescales h (``scale=2`` is a negative control).
    """
    res = ContractionReport(["pi=id", "ip-1=dh+hd", "hh=0", "ph=0", "hi=0", "faces", "d_i=i_d"])
    for I in subsets(n):
        w = whitney(n, I)
        if elementary_projection(n, w) != {I: 1}:
            res.fail("pi=id", "omega_" + "".join(map(str, I)))
        if not dupont_homotopy(n, w, scale).is_zero():
            res.fail("hi=0", "omega_" + "".join(map(str, I)))
        if not (d(w) - include(n, cochain_differential(n, {I: 1}))).is_zero():
            res.fail("d_i=i_d", "omega_" + "".join(map(str, I)))
        for j in range(n + 1 if n >= 1 else 0):
            if not (face_form(n, j, w) - include(n - 1, face_cochain(n, j, {I: 1}))).is_zero():
                res.fail("faces", f"i on omega_{''.join(map(str, I))}, face {j}")
    for s in basis_forms(n, max_degree):
        h = dupont_homotopy(n, s, scale)
        lhs = include(n, elementary_projection(n, s)) - s
        if not (lhs - d(h) - dupont_homotopy(n, d(s), scale)).is_zero():
            res.fail("ip-1=dh+hd", s)
        if not dupont_homotopy(n, h, scale).is_zero():
            res.fail("hh=0", s)
        if elementary_projection(n, h):
            res.fail("ph=0", s)
        if n >= 1:
            p = elementary_projection(n, s)
            for j in range(n + 1):
                fs = face_form(n, j, s)
                if elementary_projection(n - 1, fs) != face_cochain(n, j, p):
                    res.fail("faces", s)
                if not (face_form(n, j, h) - dupont_homotopy(n - 1, fs, scale)).is_zero():
                    res.fail("faces", s)
    return res
