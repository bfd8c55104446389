"""Corked rooted trees.

A tree is stored as nested tuples: the string ``"|"`` is a leaf, a tuple of
subtrees is a vertex, and the empty tuple is a cork (a vertex without inputs).
Every vertex has either zero or at least two children. Trees are unordered;
:func:`canonical` sorts children by :func:`key`, which orders corks before
leaves before vertices and compares vertices by their sorted child keys.

Text notation: ``*`` cork, ``|`` leaf, ``(t1 t2 ...)`` vertex, so ``((||)|)``
is the arity-3 comb.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterator, Sequence, Union

Tree = Union[str, tuple]

LEAF: Tree = "|"
CORK: Tree = ()


class TreeError(ValueError):
    """Raised on malformed trees, arity mismatches and domain errors."""


def is_leaf(t: Tree) -> bool:
    return t == LEAF


def is_cork(t: Tree) -> bool:
    return t == ()


@lru_cache(maxsize=None)
def key(t: Tree) -> tuple:
    if t == LEAF:
        return (1,)
    if t == ():
        return (0,)
    return (2,) + tuple(key(c) for c in t)


def canonical(t: Tree) -> Tree:
    """Return the canonical representative (children sorted by key)."""
    if t == LEAF:
        return t
    if not isinstance(t, tuple):
        raise TreeError(f"not a tree: {t!r}")
    if len(t) == 1:
        raise TreeError("unary vertex")
    kids = [canonical(c) for c in t]
    kids.sort(key=key)
    return tuple(kids)


def validate(t: Tree) -> Tree:
    c = canonical(t)
    if c != t:
        raise TreeError("tree is not in canonical form")
    return t


@lru_cache(maxsize=None)
def arity(t: Tree) -> int:
    if t == LEAF:
        return 1
    return sum(arity(c) for c in t)


@lru_cache(maxsize=None)
def weight(t: Tree) -> int:
    """Number of vertices, corks included."""
    if t == LEAF:
        return 0
    return 1 + sum(weight(c) for c in t)


def has_cork(t: Tree) -> bool:
    if t == LEAF:
        return False
    if t == ():
        return True
    return any(has_cork(c) for c in t)


def corolla(n: int) -> Tree:
    if n == 1:
        raise TreeError("there is no unary corolla")
    return (LEAF,) * n


# ---------------------------------------------------------------- text form

def to_text(t: Tree) -> str:
    if t == LEAF:
        return "|"
    if t == ():
        return "*"
    return "(" + "".join(to_text(c) for c in t) + ")"


def parse(s: str) -> Tree:
    """Parse the text notation; whitespace between subtrees is ignored."""
    pos = 0
    s = s.strip()

    def skip() -> None:
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def one() -> Tree:
        nonlocal pos
        skip()
        if pos >= len(s):
            raise TreeError("unexpected end of tree text")
        ch = s[pos]
        if ch == "|":
            pos += 1
            return LEAF
        if ch == "*":
            pos += 1
            return ()
        if ch == "(":
            pos += 1
            kids = []
            while True:
                skip()
                if pos >= len(s):
                    raise TreeError("unbalanced parenthesis")
                if s[pos] == ")":
                    pos += 1
                    break
                kids.append(one())
            if len(kids) < 2:
                raise TreeError("a vertex needs at least two children (use * for a cork)")
            return tuple(kids)
        raise TreeError(f"unexpected character {ch!r} at {pos}")

    t = one()
    skip()
    if pos != len(s):
        raise TreeError(f"trailing characters at {pos}")
    return canonical(t)


# -------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _all(n: int, w: int, corks: bool) -> tuple:
    if n < 0 or w < 0:
        return ()
    if w == 0:
        return (LEAF,) if n == 1 else ()
    out = []
    if corks and n == 0 and w == 1:
        out.append(())
    # root vertex with k >= 2 children, total arity n, total weight w - 1
    for kids in _multisets(n, w - 1, corks, 2):
        out.append(tuple(kids))
    out = sorted(set(canonical(t) for t in out), key=key)
    return tuple(out)


def _pool(n: int, w: int, corks: bool) -> list:
    """All trees with arity <= n and weight <= w, sorted by key."""
    pool = []
    for a in range(n + 1):
        for b in range(w + 1):
            pool.extend(_all(a, b, corks))
    pool.sort(key=key)
    return pool


def _multisets(n: int, w: int, corks: bool, min_size: int) -> Iterator[list]:
    pool = _pool(n, w, corks)

    def rec(start: int, n_left: int, w_left: int, acc: list) -> Iterator[list]:
        if n_left == 0 and w_left == 0 and len(acc) >= min_size:
            yield list(acc)
        for i in range(start, len(pool)):
            t = pool[i]
            a, b = arity(t), weight(t)
            if a > n_left or b > w_left:
                continue
            if a == 0 and b == 0:
                continue
            acc.append(t)
            yield from rec(i, n_left - a, w_left - b, acc)
            acc.pop()

    yield from rec(0, n, w, [])


def enumerate_trees(n: int, w: int, allow_corks: bool = True) -> list:
    """All canonical trees of arity ``n`` and weight ``w``, sorted by key."""
    if n < 0 or w < 0:
        raise TreeError("arity and weight must be non-negative")
    return list(_all(n, w, bool(allow_corks)))


# ------------------------------------------------------------------ grafting

def leaves_in_order(t: Tree) -> int:
    return arity(t)


def graft(t: Tree, children: Sequence[Tree]) -> Tree:
    """Substitute ``children[i]`` at the i-th leaf of ``t`` (canonical order)."""
    t = canonical(t)
    if len(children) != arity(t):
        raise TreeError(f"graft: tree has arity {arity(t)}, got {len(children)} children")
    it = iter(children)

    def sub(s: Tree) -> Tree:
        if s == LEAF:
            return next(it)
        return tuple(sub(c) for c in s)

    return canonical(sub(t))


# ----------------------------------------------------------------- symmetry

@lru_cache(maxsize=None)
def symmetry_coefficient(t: Tree) -> int:
    """Order of the automorphism group permuting isomorphic branches.

    Equals n! on the corolla c_n and |G_m| * prod E(t_i) on a grafted tree.
    """
    if t == LEAF or t == ():
        return 1
    out = 1
    for c, m in Counter(t).items():
        out *= factorial(m) * symmetry_coefficient(c) ** m
    return out


# ---------------------------------------------------------- vertex splitting

def _degree(t: Tree) -> int:
    # leaves are even; every vertex has degree -1
    return -weight(t)


def _sort_sign(kids: list) -> tuple:
    """Canonical order of a child list and the Koszul sign of the sort."""
    kids = list(kids)
    sign = 1
    # insertion sort keeps track of transpositions of odd neighbours
    for i in range(1, len(kids)):
        j = i
        while j > 0 and key(kids[j - 1]) > key(kids[j]):
            if _degree(kids[j - 1]) % 2 and _degree(kids[j]) % 2:
                sign = -sign
            kids[j - 1], kids[j] = kids[j], kids[j - 1]
            j -= 1
    return tuple(kids), sign


def _splits_at_root(t: tuple) -> Iterator[tuple]:
    """Planar splittings of the root vertex: (new ordered child list, sign)."""
    k = len(t)
    if k == 0:
        return
    # insert a cork at every position
    for pos in range(k + 1):
        kids = list(t[:pos]) + [()] + list(t[pos:])
        sign = -1
        for c in t[:pos]:
            if _degree(c) % 2:
                sign = -sign
        yield kids, sign
    # group q >= 2 children into a new vertex, keeping at least one sibling
    for q in range(2, k):
        for S in combinations(range(k), q):
            inner = tuple(t[i] for i in S)
            rest = [t[i] for i in range(k) if i not in S]
            # Koszul sign of moving the grouped children to the front
            sign = -1
            parity = 0
            for i in S:
                for j in range(i):
                    if j not in S and _degree(t[i]) % 2 and _degree(t[j]) % 2:
                        parity ^= 1
            if parity:
                sign = -sign
            new = inner
            for pos in range(len(rest) + 1):
                s2 = sign
                for c in rest[:pos]:
                    if _degree(c) % 2 and _degree(new) % 2:
                        s2 = -s2
                yield rest[:pos] + [new] + rest[pos:], s2


def vertex_splittings(t: Tree) -> list:
    """Trees one vertex heavier that contract back to ``t``.

    Returns ``(tree, multiplicity, sign)`` triples sorted by key. The
    multiplicity counts the planar realizations over a fixed planar
    representative of ``t``; the sign is the Koszul sign of the splitting
    term (vertices odd, leaves even) in the tree differential. A lone cork
    splits into a binary vertex carrying two corks.
    """
    t = canonical(t)
    if t == LEAF:
        raise TreeError("the trivial tree has no vertex to split")
    acc: dict = {}

    def walk(s: Tree, wrap) -> None:
        if s == LEAF:
            return
        if s == ():
            new = ((), ())
            acc.setdefault(canonical(wrap(new)), []).append(1)
            return
        for kids, sign in _splits_at_root(s):
            ordered, ssign = _sort_sign(kids)
            acc.setdefault(canonical(wrap(ordered)), []).append(sign * ssign)
        for i, c in enumerate(s):
            def w2(x, i=i, s=s, wrap=wrap):
                return wrap(s[:i] + (x,) + s[i + 1:])
            walk(c, w2)

    walk(t, lambda x: x)
    out = []
    for tree, signs in acc.items():
        tot = sum(signs)
        if tot == 0:
            out.append((tree, len(signs), 1))
        else:
            out.append((tree, abs(tot), 1 if tot > 0 else -1))
    out.sort(key=lambda x: key(x[0]))
    return out


def contractions(t: Tree) -> set:
    """Trees obtained by contracting one internal edge or deleting one cork."""
    t = canonical(t)
    out = set()

    def walk(s: Tree, wrap) -> None:
        if s == LEAF or s == ():
            return
        for i, c in enumerate(s):
            rest = s[:i] + s[i + 1:]
            if c == ():
                if len(rest) >= 2:
                    out.add(canonical(wrap(rest)))
                elif len(rest) == 1 and rest[0] == ():
                    out.add(canonical(wrap(())))
            elif c != LEAF:
                out.add(canonical(wrap(rest + c)))
        for i, c in enumerate(s):
            walk(c, lambda x, i=i, s=s, wrap=wrap: wrap(s[:i] + (x,) + s[i + 1:]))

    walk(t, lambda x: x)
    return out
