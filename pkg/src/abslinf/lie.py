"""Free Lie algebras in the Lyndon basis and the associative BCH oracle.

Words are strings over a totally ordered alphabet. Lie polynomials are
stored by their image in the free associative algebra, ``{word: Fraction}``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Dict, List, Mapping, Sequence

from .core import FiniteAlgebra

Assoc = Dict[str, Fraction]


def is_lyndon(w: str) -> bool:
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w))) and all(w < w[i:] for i in range(1, len(w)))


def lyndon_words(alphabet: str, max_len: int) -> List[str]:
    """Lyndon words up to ``max_len``, ordered by length then lexicographically."""
    out = []
    for n in range(1, max_len + 1):
        for tup in product(sorted(alphabet), repeat=n):
            w = "".join(tup)
            if is_lyndon(w):
                out.append(w)
    return out


def standard_factorization(w: str) -> tuple:
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        v = w[i:]
        if is_lyndon(v):
            return w[:i], v
    raise ValueError(f"{w} has no standard factorization")


def amul(a: Mapping, b: Mapping) -> Assoc:
    out: Assoc = {}
    for u, x in a.items():
        for v, y in b.items():
            w = u + v
            out[w] = out.get(w, 0) + x * y
    return {k: v for k, v in out.items() if v}


def aadd(a: Mapping, b: Mapping, c=1) -> Assoc:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + c * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def bracket(a: Mapping, b: Mapping) -> Assoc:
    return aadd(amul(a, b), amul(b, a), -1)


@lru_cache(maxsize=None)
def _lyndon_poly(w: str) -> tuple:
    if len(w) == 1:
        return ((w, Fraction(1)),)
    u, v = standard_factorization(w)
    return tuple(sorted(bracket(lyndon_poly(u), lyndon_poly(v)).items()))


def lyndon_poly(w: str) -> Assoc:
    """Associative expansion of the standard bracketing of a Lyndon word."""
    return dict(_lyndon_poly(w))


def to_lyndon(p: Mapping) -> Dict[str, Fraction]:
    """Coordinates of a Lie polynomial in the Lyndon basis.

    The standard bracketing of w is w plus lexicographically larger words, so
    repeatedly clearing the smallest word recovers the coordinates.
    """
    p = {k: Fraction(v) for k, v in p.items() if v}
    out: Dict[str, Fraction] = {}
    while p:
        w = min(p, key=lambda s: (len(s), s))
        if not is_lyndon(w):
            raise ValueError(f"not a Lie polynomial (stuck at {w})")
        c = p[w]
        out[w] = out.get(w, 0) + c
        p = aadd(p, lyndon_poly(w), -c)
    return out


def from_lyndon(x: Mapping) -> Assoc:
    acc: Assoc = {}
    for w, c in x.items():
        acc = aadd(acc, lyndon_poly(w), Fraction(c))
    return acc


def left_normed(word: str) -> Assoc:
    """[..[[w1, w2], w3], .., wk]."""
    acc: Assoc = {word[0]: Fraction(1)}
    for ch in word[1:]:
        acc = bracket(acc, {ch: Fraction(1)})
    return acc


def dynkin(p: Mapping) -> Assoc:
    """Dynkin idempotent: sends a homogeneous word of length k to (1/k) left-normed bracket."""
    acc: Assoc = {}
    for w, c in p.items():
        if w:
            acc = aadd(acc, left_normed(w), Fraction(c, len(w)))
    return acc


def truncate(p: Mapping, n: int) -> Assoc:
    return {k: v for k, v in p.items() if len(k) <= n and v}


def aexp(p: Mapping, n: int) -> Assoc:
    """exp of an element without constant term, truncated at word length n."""
    acc: Assoc = {"": Fraction(1)}
    term: Assoc = {"": Fraction(1)}
    for k in range(1, n + 1):
        term = truncate(amul(term, p), n)
        acc = aadd(acc, term, Fraction(1, factorial(k)))
    return acc


def alog(p: Mapping, n: int) -> Assoc:
    """log of an element with constant term 1, truncated at word length n."""
    q = dict(p)
    if q.get("", 0) != 1:
        raise ValueError("log needs constant term 1")
    del q[""]
    acc: Assoc = {}
    term: Assoc = {"": Fraction(1)}
    for k in range(1, n + 1):
        term = truncate(amul(term, q), n)
        acc = aadd(acc, term, Fraction((-1) ** (k + 1), k))
    return acc


def bch_oracle(W: int) -> Dict[str, Fraction]:
    """Lyndon coordinates of log(e^x e^y) through word length W."""
    z = alog(amul(aexp({"x": Fraction(1)}, W), aexp({"y": Fraction(1)}, W)), W)
    z = truncate(z, W)
    return to_lyndon(dynkin(z))


def bch_oracle_assoc(W: int) -> Assoc:
    return truncate(alog(amul(aexp({"x": Fraction(1)}, W), aexp({"y": Fraction(1)}, W)), W), W)


def free_lie_algebra(alphabet: str, W: int, scale=1) -> FiniteAlgebra:
    """Free Lie algebra truncated at bracket length W, shifted into degree 1.

    Basis: Lyndon words (weight = length). l_2(u, v) = scale * [u, v]; all
    other operations, the differential and the curvature vanish.
    """
    words = lyndon_words(alphabet, W)
    basis = [(w, 1, len(w)) for w in words]
    ops = {}
    for i, u in enumerate(words):
        for v in words[i + 1:]:
            if len(u) + len(v) > W:
                continue
            br = to_lyndon(bracket(lyndon_poly(u), lyndon_poly(v)))
            ops[(u, v)] = {k: c * scale for k, c in br.items()}
    return FiniteAlgebra(basis, {}, ops, W)
