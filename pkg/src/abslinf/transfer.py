"""Transferred operations on simplex cochains and their dual decompositions.

mu_tau(x_1, .., x_m) = p(tree composite), with i on the leaves, the wedge
product at each vertex and h on internal edges. The composite follows the
Koszul rule: an h sitting over a block of inputs picks up the sign of
passing the inputs of the sibling blocks on its left.

The decomposition Delta_tau(a_I) is the adjoint: its coefficient on the
ordered tuple (a_J1, .., a_Jm) is the coefficient of omega_I in
mu_tau(omega_J1, .., omega_Jm).
"""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from . import dupont as D
from . import trees as T
from .linalg import fmt


class TransferError(ValueError):
    pass


def _deg(J: tuple) -> int:
    return -(len(J) - 1)


@lru_cache(maxsize=None)
def _mu_basis(n: int, tau, labels: tuple) -> Tuple[Tuple[tuple, Fraction], ...]:
    it = iter(labels)

    def ev(s):
        """(form, total input degree, sign) of a subtree before projection."""
        if s == T.LEAF:
            J = next(it)
            return D.whitney(n, J), _deg(J), 1
        if s == ():
            return D.PolyForm.one(n), 0, 1
        forms = []
        sign = 1
        left = 0
        for c in s:
            f, dg, sg = ev(c)
            sign *= sg
            if c != T.LEAF and c != ():
                if left % 2:
                    sign = -sign
                f = D.dupont_homotopy(n, f)
            forms.append(f)
            left += dg
        return D.wedge_product(n, forms), left, sign

    form, _, sign = ev(tau)
    out = D.elementary_projection(n, form)
    return tuple(sorted((I, c * sign) for I, c in out.items()))


def transferred_operation(n: int, tau, inputs: Sequence[Mapping]) -> Dict[tuple, Fraction]:
    """mu_tau on cochains of the n-simplex (inputs in canonical leaf order)."""
    tau = T.canonical(tau if not isinstance(tau, str) or tau == T.LEAF else T.parse(tau))
    if tau == T.LEAF:
        raise TransferError("the trivial tree is not an operation")
    if tau == ():
        if inputs:
            raise TransferError("the cork takes no inputs")
        return {(i,): Fraction(1) for i in range(n + 1)}
    if len(inputs) != T.arity(tau):
        raise TransferError(f"tree of arity {T.arity(tau)} got {len(inputs)} inputs")
    if T.has_cork(tau):
        # trees mixing corks and leaves transfer to zero
        return {}
    acc: Dict[tuple, Fraction] = {}
    items = [sorted((tuple(I), Fraction(c)) for I, c in x.items() if c) for x in inputs]
    for combo in product(*items):
        coef = Fraction(1)
        labels = []
        for I, c in combo:
            coef *= c
            labels.append(I)
        for I, v in _mu_basis(n, tau, tuple(labels)):
            s = acc.get(I, 0) + coef * v
            if s:
                acc[I] = s
            else:
                acc.pop(I, None)
    return acc


def vertex_count(tau) -> int:
    return T.weight(tau)


def labelings(n: int, tau, budget: int | None = None, allowed: Iterable[tuple] | None = None) -> List[tuple]:
    """Ordered leaf labelings of tau whose degree is compatible with some output.

    A labeling (J_1, .., J_m) can only hit omega_I when
    sum(|J_j| - 1) = |I| - 1 + (#vertices - 1) <= n.
    """
    m = T.arity(tau)
    v = vertex_count(tau)
    subs = list(allowed) if allowed is not None else D.subsets(n)
    cap = n if budget is None else budget
    lo = v - 1
    by_excess: Dict[int, list] = {}
    for J in subs:
        by_excess.setdefault(len(J) - 1, []).append(tuple(J))
    out: List[tuple] = []

    def rec(i: int, used: int, acc: list) -> None:
        if i == m:
            if lo <= used <= lo + cap:
                out.append(tuple(acc))
            return
        for e, Js in sorted(by_excess.items()):
            if used + e > lo + cap:
                break
            for J in Js:
                acc.append(J)
                rec(i + 1, used + e, acc)
                acc.pop()

    rec(0, 0, [])
    return out


@lru_cache(maxsize=None)
def _decomposition(n: int, tau, allowed: tuple | None) -> Dict[tuple, tuple]:
    out: Dict[tuple, list] = {}
    if tau == ():
        for i in range(n + 1):
            out[(i,)] = [((), Fraction(1))]
        return {k: tuple(v) for k, v in out.items()}
    for labs in labelings(n, tau, allowed=allowed):
        for I, c in _mu_basis(n, tau, labs):
            out.setdefault(I, []).append((labs, c))
    return {k: tuple(v) for k, v in out.items()}


def simplex_decomposition(n: int, tau, I: Sequence[int], allowed: Iterable[tuple] | None = None) -> List[tuple]:
    """Delta_tau(a_I) as a list of ((J_1, .., J_m), coefficient)."""
    tau = T.canonical(tau)
    I = tuple(sorted(I))
    if tau == T.LEAF:
        raise TransferError("the trivial tree is not an operation")
    if tau != () and T.has_cork(tau):
        return []
    al = tuple(sorted(tuple(sorted(J)) for J in allowed)) if allowed is not None else None
    return list(_decomposition(n, tau, al).get(I, ()))


# --------------------------------------------------------------- tables

class DecompositionTable:
    """Delta_tau(a_I) for a fixed simplex dimension and a set of trees."""

    def __init__(self, n: int, entries: Mapping | None = None):
        self.n = n
        self.entries: Dict[tuple, List[tuple]] = {}
        for (tau, I), lst in (entries or {}).items():
            self.entries[(T.canonical(tau), tuple(I))] = [(tuple(map(tuple, Js)), Fraction(c)) for Js, c in lst]

    @classmethod
    def compute(cls, n: int, trees: Iterable, allowed: Iterable[tuple] | None = None) -> "DecompositionTable":
        tab = cls(n)
        for tau in trees:
            tau = T.canonical(tau)
            al = tuple(sorted(tuple(sorted(J)) for J in allowed)) if allowed is not None else None
            for I, lst in _decomposition(n, tau, al).items():
                if lst:
                    tab.entries[(tau, I)] = list(lst)
        return tab

    @classmethod
    def up_to_weight(cls, n: int, max_vertices: int, max_arity: int) -> "DecompositionTable":
        trees = [()]
        for v in range(1, max_vertices + 1):
            for m in range(2, max_arity + 1):
                trees.extend(T.enumerate_trees(m, v, allow_corks=False))
        return cls.cached(n, trees)

    @classmethod
    def cached(cls, n: int, trees: Sequence) -> "DecompositionTable":
        """compute() with an optional content-addressed cache in ABS_CACHE_DIR."""
        root = os.environ.get("ABS_CACHE_DIR")
        trees = sorted({T.canonical(t) for t in trees}, key=T.key)
        if not root:
            return cls.compute(n, trees)
        ident = json.dumps({"n": n, "trees": [T.to_text(t) for t in trees], "v": 1}, sort_keys=True)
        digest = hashlib.sha256(ident.encode()).hexdigest()
        path = os.path.join(root, f"{digest}.json")
        if os.path.exists(path):
            with open(path) as fh:
                return cls.from_json(json.load(fh))
        tab = cls.compute(n, trees)
        os.makedirs(root, exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(tab.to_json(), fh, sort_keys=True)
        os.replace(tmp, path)
        return tab

    def get(self, tau, I) -> List[tuple]:
        return self.entries.get((T.canonical(tau), tuple(I)), [])

    def trees(self) -> list:
        return sorted({t for t, _ in self.entries}, key=T.key)

    def to_json(self) -> dict:
        rows = []
        for (tau, I), lst in sorted(self.entries.items(), key=lambda kv: (T.key(kv[0][0]), kv[0][1])):
            rows.append({
                "tree": T.to_text(tau),
                "subset": list(I),
                "terms": [{"factors": [list(J) for J in Js], "coeff": fmt(c)} for Js, c in lst],
            })
        return {"n": self.n, "entries": rows}

    @classmethod
    def from_json(cls, doc: Mapping) -> "DecompositionTable":
        try:
            entries = {}
            for row in doc["entries"]:
                key = (T.parse(row["tree"]), tuple(row["subset"]))
                entries[key] = [(tuple(tuple(J) for J in t["factors"]), Fraction(t["coeff"])) for t in row["terms"]]
            return cls(int(doc["n"]), entries)
        except (KeyError, TypeError, ValueError) as e:
            raise TransferError(f"malformed decomposition table: {e}") from None

    def check_degrees(self) -> bool:
        """sum deg(J_j) - deg(I) = #vertices - 1 on every entry."""
        for (tau, I), lst in self.entries.items():
            for Js, _ in lst:
                if tau == ():
                    continue
                if sum(_deg(J) for J in Js) - _deg(I) != -(T.weight(tau) - 1):
                    return False
        return True
