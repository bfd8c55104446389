"""Convolution algebras hom(C, g) for finite strictly counital coalgebras.

A basis element ``(c, k)`` of hom(C, g) sends the basis vector c of C to the
basis vector k of g and every other basis vector to zero; it has degree
|k| - |c| and the weight of k. The operations are
l_n(f_1, .., f_n) = l_n^g o (f_1 (x) .. (x) f_n) o Delta_n, the curvature is
l_0^g o eps and d f = d_g o f - (-1)^|f| f o d_C.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .core import (AlgebraError, AlgebraPresentation, Element, FiniteAlgebra, QuasiFreeAlgebra,
                   add_into, alpha_homology, mc_residual)


class CoalgebraError(ValueError):
    pass


class CounitalCoalgebra:
    """Finite graded coalgebra with counit and iterated coproducts.

    ``coproduct[c]`` lists (ordered tuple of basis labels, coefficient) for
    Delta_2(c); higher Delta_m are iterated from it unless given in ``higher``.
    """

    def __init__(self, basis: Sequence[Tuple[str, int]], counit: Mapping[str, object],
                 coproduct: Mapping[str, Iterable], differential: Mapping | None = None,
                 higher: Mapping[int, Mapping[str, Iterable]] | None = None):
        self.labels = [b[0] for b in basis]
        if len(set(self.labels)) != len(self.labels):
            raise CoalgebraError("duplicate basis label")
        self.deg = {b[0]: int(b[1]) for b in basis}
        self.counit = {k: Fraction(v) for k, v in counit.items() if Fraction(v)}
        for k in self.counit:
            self._check(k)
            if self.deg[k] != 0:
                raise CoalgebraError("the counit is supported in degree 0")
        self.delta2: Dict[str, Dict[tuple, Fraction]] = {c: {} for c in self.labels}
        for c, terms in coproduct.items():
            self._check(c)
            for tup, coef in terms:
                tup = tuple(tup)
                if len(tup) != 2:
                    raise CoalgebraError("coproduct terms have two factors")
                for x in tup:
                    self._check(x)
                if sum(self.deg[x] for x in tup) != self.deg[c]:
                    raise CoalgebraError(f"coproduct of {c} has wrong degree")
                self.delta2[c][tup] = self.delta2[c].get(tup, 0) + Fraction(coef)
        self.d = {c: {k: Fraction(v) for k, v in (differential or {}).get(c, {}).items() if v}
                  for c in self.labels}
        self._higher = {int(m): {c: {tuple(t): Fraction(v) for t, v in terms} for c, terms in tab.items()}
                        for m, tab in (higher or {}).items()}
        self._cache: Dict[int, Dict[str, Dict[tuple, Fraction]]] = {}
        self.validate()

    def _check(self, c: str) -> None:
        if c not in self.deg:
            raise CoalgebraError(f"unknown basis label {c!r}")

    def delta(self, m: int) -> Dict[str, Dict[tuple, Fraction]]:
        """Delta_m as {c: {ordered tuple: coefficient}}; Delta_1 is the identity."""
        if m < 1:
            raise CoalgebraError("iterated coproducts start at m = 1")
        if m == 1:
            return {c: {(c,): Fraction(1)} for c in self.labels}
        if m == 2:
            return self.delta2
        if m in self._higher:
            return self._higher[m]
        if m not in self._cache:
            prev = self.delta(m - 1)
            out: Dict[str, Dict[tuple, Fraction]] = {}
            for c in self.labels:
                acc: Dict[tuple, Fraction] = {}
                for (a, b), x in self.delta2[c].items():
                    for tup, y in prev[b].items():
                        k = (a,) + tup
                        acc[k] = acc.get(k, 0) + x * y
                out[c] = {k: v for k, v in acc.items() if v}
            self._cache[m] = out
        return self._cache[m]

    def validate(self) -> None:
        # counit laws
        for c in self.labels:
            left: Dict[str, Fraction] = {}
            right: Dict[str, Fraction] = {}
            for (a, b), x in self.delta2[c].items():
                if a in self.counit:
                    left[b] = left.get(b, 0) + x * self.counit[a]
                if b in self.counit:
                    right[a] = right.get(a, 0) + x * self.counit[b]
            want = {c: Fraction(1)}
            if {k: v for k, v in left.items() if v} != want or {k: v for k, v in right.items() if v} != want:
                raise CoalgebraError(f"counit law fails on {c}")
        # coassociativity
        for c in self.labels:
            l: Dict[tuple, Fraction] = {}
            r: Dict[tuple, Fraction] = {}
            for (a, b), x in self.delta2[c].items():
                for (a1, a2), y in self.delta2[a].items():
                    l[(a1, a2, b)] = l.get((a1, a2, b), 0) + x * y
                for (b1, b2), y in self.delta2[b].items():
                    r[(a, b1, b2)] = r.get((a, b1, b2), 0) + x * y
            if {k: v for k, v in l.items() if v} != {k: v for k, v in r.items() if v}:
                raise CoalgebraError(f"coassociativity fails on {c}")
        # graded cocommutativity
        for c in self.labels:
            for (a, b), x in self.delta2[c].items():
                s = -1 if self.deg[a] % 2 and self.deg[b] % 2 else 1
                if self.delta2[c].get((b, a), 0) != s * x:
                    raise CoalgebraError(f"coproduct of {c} is not cocommutative")

    # standard examples -----------------------------------------------------
    @classmethod
    def group_likes(cls, k: int) -> "CounitalCoalgebra":
        labels = [f"g{i}" for i in range(k)]
        return cls([(l, 0) for l in labels], {l: 1 for l in labels},
                   {l: [((l, l), 1)] for l in labels})

    @classmethod
    def circle_homology(cls) -> "CounitalCoalgebra":
        """H_*(S^1): e0 group-like, e1 primitive of degree 1."""
        return cls([("e0", 0), ("e1", 1)], {"e0": 1},
                   {"e0": [(("e0", "e0"), 1)], "e1": [(("e0", "e1"), 1), (("e1", "e0"), 1)]})

    def to_json(self) -> dict:
        return {
            "basis": [{"label": c, "degree": self.deg[c]} for c in self.labels],
            "counit": {c: str(v) for c, v in sorted(self.counit.items())},
            "coproduct": {c: [{"factors": list(t), "coeff": str(v)} for t, v in sorted(self.delta2[c].items())]
                          for c in self.labels if self.delta2[c]},
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "CounitalCoalgebra":
        try:
            basis = [(b["label"], b["degree"]) for b in doc["basis"]]
            counit = doc.get("counit", {})
            cop = {c: [(t["factors"], t["coeff"]) for t in terms] for c, terms in doc.get("coproduct", {}).items()}
        except (KeyError, TypeError) as e:
            raise CoalgebraError(f"malformed coalgebra document: {e}") from None
        return cls(basis, counit, cop)


class ConvolutionAlgebra(AlgebraPresentation):
    def __init__(self, C: CounitalCoalgebra, g: AlgebraPresentation):
        self.C = C
        self.g = g
        self.W = g.W
        self.gain = g.gain
        self._index: Dict[int, Dict[tuple, List[tuple]]] = {}

    def degree(self, key) -> int:
        c, k = key
        return self.g.degree(k) - self.C.deg[c]

    def weight(self, key) -> int:
        return self.g.weight(key[1])

    def basis(self, degree: int) -> list:
        out = []
        for c in self.C.labels:
            for k in self.g.basis(degree + self.C.deg[c]):
                out.append((c, k))
        return out

    def degrees(self) -> List[int]:
        gd = self.g.degrees() if hasattr(self.g, "degrees") else []
        return sorted({d - self.C.deg[c] for d in gd for c in self.C.labels})

    def d_basis(self, key) -> Element:
        c, k = key
        acc: Element = {}
        for k2, v in self.g.d_basis(k).items():
            add_into(acc, {(c, k2): Fraction(1)}, v)
        s = -1 if self.degree(key) % 2 else 1
        for c2 in self.C.labels:
            coef = self.C.d[c2].get(c)
            if coef:
                add_into(acc, {(c2, k): Fraction(1)}, -s * coef)
        return acc

    def _by_factors(self, m: int) -> Dict[tuple, List[tuple]]:
        if m not in self._index:
            idx: Dict[tuple, List[tuple]] = {}
            for c, terms in self.C.delta(m).items():
                for tup, v in terms.items():
                    idx.setdefault(tup, []).append((c, v))
            self._index[m] = idx
        return self._index[m]

    def op_basis(self, keys: tuple) -> Element:
        if not keys:
            acc: Element = {}
            l0 = self.g.curvature()
            for c, e in self.C.counit.items():
                for k, v in l0.items():
                    add_into(acc, {(c, k): Fraction(1)}, e * v)
            return acc
        cs = tuple(c for c, _ in keys)
        targets = self._by_factors(len(keys)).get(cs)
        if not targets:
            return {}
        val = self.g.op([{k: Fraction(1)} for _, k in keys])
        if not val:
            return {}
        # Koszul sign of applying f_1 (x) .. (x) f_n to c_1 (x) .. (x) c_n
        sign = 1
        for j in range(len(keys)):
            if self.degree(keys[j]) % 2:
                for i in range(j):
                    if self.C.deg[cs[i]] % 2:
                        sign = -sign
        acc = {}
        for c, coef in targets:
            for k, v in val.items():
                add_into(acc, {(c, k): Fraction(1)}, sign * coef * v)
        return acc


def convolution_algebra(C: CounitalCoalgebra, g: AlgebraPresentation) -> ConvolutionAlgebra:
    return ConvolutionAlgebra(C, g)


# ------------------------------------------------------------ scalar extension

class CommutativeAlgebra:
    """Finite-dimensional commutative unital algebra from structure constants."""

    def __init__(self, basis: Sequence[str], unit: Mapping[str, object], mult: Mapping[tuple, Mapping]):
        self.basis = list(basis)
        self.unit = {k: Fraction(v) for k, v in unit.items() if Fraction(v)}
        self.mult: Dict[tuple, Dict[str, Fraction]] = {}
        for (a, b), out in mult.items():
            for x in (a, b, *out):
                if x not in self.basis:
                    raise CoalgebraError(f"unknown basis element {x!r}")
            self.mult[(a, b)] = {k: Fraction(v) for k, v in out.items() if Fraction(v)}
        self._validate()

    def mul(self, x: Mapping, y: Mapping) -> Dict[str, Fraction]:
        acc: Dict[str, Fraction] = {}
        for a, u in x.items():
            for b, v in y.items():
                for k, w in self.mult.get((a, b), {}).items():
                    acc[k] = acc.get(k, 0) + u * v * w
        return {k: v for k, v in acc.items() if v}

    def _validate(self) -> None:
        e = {b: {b: Fraction(1)} for b in self.basis}
        for a in self.basis:
            for b in self.basis:
                if self.mul(e[a], e[b]) != self.mul(e[b], e[a]):
                    raise CoalgebraError("algebra is not commutative")
                for c in self.basis:
                    if self.mul(self.mul(e[a], e[b]), e[c]) != self.mul(e[a], self.mul(e[b], e[c])):
                        raise CoalgebraError("algebra is not associative")
            if self.mul(self.unit, e[a]) != e[a]:
                raise CoalgebraError("unit law fails")

    def dual_coalgebra(self) -> CounitalCoalgebra:
        cop: Dict[str, list] = {b: [] for b in self.basis}
        for (a, b), out in self.mult.items():
            for k, v in out.items():
                cop[k].append(((a, b), v))
        return CounitalCoalgebra([(b, 0) for b in self.basis], self.unit, cop)

    @classmethod
    def from_json(cls, doc: Mapping) -> "CommutativeAlgebra":
        try:
            mult = {}
            for entry in doc["mult"]:
                mult[(entry["left"], entry["right"])] = entry["output"]
            return cls(doc["basis"], doc["unit"], mult)
        except (KeyError, TypeError) as e:
            raise CoalgebraError(f"malformed algebra document: {e}") from None

    @classmethod
    def rationals(cls) -> "CommutativeAlgebra":
        return cls(["1"], {"1": 1}, {("1", "1"): {"1": 1}})

    @classmethod
    def quadratic(cls, c: int) -> "CommutativeAlgebra":
        """Q[x]/(x^2 - c)."""
        return cls(["1", "x"], {"1": 1}, {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1},
                                          ("x", "1"): {"x": 1}, ("x", "x"): {"1": c}})


def scalar_extension(g: AlgebraPresentation, B: CommutativeAlgebra) -> ConvolutionAlgebra:
    """g over B, realized as hom(B^dual, g); the key (b, k) stands for b (x) k."""
    return ConvolutionAlgebra(B.dual_coalgebra(), g)


def g_complex() -> FiniteAlgebra:
    """Two-dimensional algebra with MC equation lambda^2 = -1 on lambda * y."""
    return FiniteAlgebra([("y", 0, 1), ("z", -1, 2)], {}, {("y", "y"): {"z": 2}, (): {"z": 1}}, W=2)


def mc_system(g: AlgebraPresentation, prefix: str = "a"):
    """The MC equation on a generic degree-0 element as sympy polynomials.

    Returns (symbols by basis key, {output key: polynomial}).
    """
    import sympy

    keys = g.basis(0)
    syms = {k: sympy.Symbol(f"{prefix}_{_keyname(k)}") for k in keys}
    eqs: Dict[object, object] = {}

    def add(out: Mapping, mono) -> None:
        for k, v in out.items():
            eqs[k] = eqs.get(k, 0) + sympy.Rational(v.numerator, v.denominator) * mono

    add(g.curvature(), sympy.Integer(1))
    for k in keys:
        add(g.d_basis(k), syms[k])
    n = 2
    minw = min((g.weight(k) for k in keys), default=g.W + 1)
    while n * minw + g.gain <= g.W:
        for combo in combinations_with_replacement(keys, n):
            cnt = factorial(n)
            for k in set(combo):
                cnt //= factorial(combo.count(k))
            mono = sympy.Integer(1)
            for k in combo:
                mono *= syms[k]
            out = g.op([{k: Fraction(1)} for k in combo])
            add(out, mono * sympy.Rational(cnt, factorial(n)))
        n += 1
    eqs = {k: sympy.expand(v) for k, v in eqs.items() if sympy.expand(v) != 0}
    return syms, eqs


def _keyname(k) -> str:
    if isinstance(k, tuple):
        return "_".join(_keyname(x) for x in k)
    return str(k)


def mapping_homotopy_groups(H: CounitalCoalgebra, g: AlgebraPresentation, alpha: Mapping,
                            degrees: Iterable[int], W: int | None = None) -> dict:
    """alpha-homology of hom(H, g)."""
    if W is not None and W != g.W:
        if isinstance(g, QuasiFreeAlgebra):
            g = g.truncated(W)
        else:
            raise AlgebraError("re-truncation is only supported for quasi-free algebras")
    A = convolution_algebra(H, g)
    return alpha_homology(A, alpha, degrees)
