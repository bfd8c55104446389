"""Weight-truncated curved absolute L-infinity algebras.

All algebras follow the shifted convention: every operation l_n (n != 1)
and the pre-differential d have degree -1, the l_n are graded symmetric, and
together with l_1 = d they satisfy the classical relations

    sum_{p+q=n+1} sum_{unshuffles s} eps(s) l_p(l_q(x_s1..x_sq), x_s(q+1)..x_sn) = 0.

For n = 1 this reads d(d x) = -l_2(l_0, x). Elements are dicts
``{basis key: Fraction}``; everything above the truncation weight ``W`` is
discarded, which is exact because all structure maps are weight
non-decreasing.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import factorial
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple

from . import trees as T
from .linalg import GradedComplex, SparseMatrix, homology_dims, check_square_zero

Element = Dict[Hashable, Fraction]


class AlgebraError(ValueError):
    pass


# ---------------------------------------------------------------- elements

def add_into(acc: Element, x: Mapping, c=1) -> Element:
    if not c:
        return acc
    for k, v in x.items():
        s = acc.get(k, 0) + c * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


def scale(x: Mapping, c) -> Element:
    c = Fraction(c)
    if not c:
        return {}
    return {k: v * c for k, v in x.items()}


def combine(*pairs) -> Element:
    """combine((c1, x1), (c2, x2), ...) = c1 x1 + c2 x2 + ..."""
    acc: Element = {}
    for c, x in pairs:
        add_into(acc, x, c)
    return acc


def unshuffles(n: int, q: int) -> Iterable[Tuple[tuple, tuple]]:
    for S in combinations(range(n), q):
        rest = tuple(i for i in range(n) if i not in S)
        yield S, rest


def koszul_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of reordering items of the given degrees into the order ``perm``."""
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and degrees[perm[a]] % 2 and degrees[perm[b]] % 2:
                sign = -sign
    return sign


# ------------------------------------------------------------- base class

class AlgebraPresentation:
    """Interface shared by finite, quasi-free and convolution algebras.

    Subclasses provide ``degree``, ``weight``, ``d_basis``, ``op_basis``
    and ``basis``; ``gain`` is a lower bound for how much an operation raises
    weight beyond the sum of its inputs.
    """

    W: int
    gain: int = 0

    def degree(self, key) -> int:
        raise NotImplementedError

    def weight(self, key) -> int:
        raise NotImplementedError

    def d_basis(self, key) -> Element:
        raise NotImplementedError

    def op_basis(self, keys: tuple) -> Element:
        raise NotImplementedError

    def basis(self, degree: int) -> list:
        raise NotImplementedError

    def min_degree_hint(self) -> int:
        return -1

    # generic multilinear machinery ---------------------------------------
    def truncate(self, x: Mapping) -> Element:
        return {k: v for k, v in x.items() if v and self.weight(k) <= self.W}

    def d(self, x: Mapping) -> Element:
        acc: Element = {}
        for k, c in x.items():
            add_into(acc, self.d_basis(k), c)
        return acc

    def curvature(self) -> Element:
        return self.op_basis(())

    def op(self, xs: Sequence[Mapping]) -> Element:
        """l_k on elements (k = len(xs) != 1)."""
        k = len(xs)
        if k == 1:
            raise AlgebraError("l_1 is the differential; use d")
        if k == 0:
            return self.curvature()
        if any(not x for x in xs):
            return {}
        budget = self.W - (self.gain if k else 0)
        terms = [sorted(x.items(), key=lambda kv: self.weight(kv[0])) for x in xs]
        minw = [self.weight(t[0][0]) for t in terms]
        acc: Element = {}

        def rec(i: int, chosen: list, coef: Fraction, wsum: int) -> None:
            if i == k:
                add_into(acc, self.op_basis(tuple(chosen)), coef)
                return
            rest_min = sum(minw[i + 1:])
            for key, c in terms[i]:
                w = wsum + self.weight(key)
                if w + rest_min > budget:
                    break
                chosen.append(key)
                rec(i + 1, chosen, coef * c, w)
                chosen.pop()

        rec(0, [], Fraction(1), 0)
        return acc

    def op_power(self, x: Mapping, k: int, tail: Sequence[Mapping] = ()) -> Element:
        """l_{k+len(tail)}(x, .., x, *tail) for an even element x."""
        if k == 0:
            return self.op(list(tail)) if len(tail) != 1 else self.d(tail[0])
        items = sorted(x.items(), key=lambda kv: (self.weight(kv[0]), repr(kv[0])))
        if any(self.degree(key) % 2 for key, _ in items):
            raise AlgebraError("op_power needs an even element")
        tail_min = sum(min((self.weight(t) for t in y), default=0) for y in tail)
        budget = self.W - self.gain - tail_min
        acc: Element = {}
        n_total = k + len(tail)

        def rec(start: int, left: int, chosen: list, coef: Fraction, wsum: int, mult: Counter) -> None:
            if left == 0:
                # multinomial count of orderings of the chosen multiset
                cnt = factorial(k)
                for m in mult.values():
                    cnt //= factorial(m)
                xs = [{key: Fraction(1)} for key in chosen] + list(tail)
                add_into(acc, self.op(xs) if n_total != 1 else self.d(xs[0]), coef * cnt)
                return
            for i in range(start, len(items)):
                key, c = items[i]
                w = wsum + self.weight(key)
                if wsum + self.weight(key) * left > budget:
                    break
                chosen.append(key)
                mult[key] += 1
                rec(i, left - 1, chosen, coef * c, w, mult)
                mult[key] -= 1
                chosen.pop()

        rec(0, k, [], Fraction(1), 0, Counter())
        return acc

    def element_degree(self, x: Mapping) -> int | None:
        degs = {self.degree(k) for k in x}
        if len(degs) > 1:
            raise AlgebraError(f"inhomogeneous element (degrees {sorted(degs)})")
        return degs.pop() if degs else None

    def min_weight(self, x: Mapping) -> int:
        return min((self.weight(k) for k in x), default=self.W + 1)


# ------------------------------------------------------------ finite algebras

class FiniteAlgebra(AlgebraPresentation):
    """Finite basis with explicit operation tables.

    ``ops`` maps a tuple of input labels to an output element; tables are
    symmetrized with Koszul signs, so one ordering per multiset suffices.
    The empty tuple holds the curvature.
    """

    def __init__(self, basis: Sequence[Tuple[str, int, int]], d: Mapping | None = None,
                 ops: Mapping | None = None, W: int | None = None):
        self.labels = [b[0] for b in basis]
        if len(set(self.labels)) != len(self.labels):
            raise AlgebraError("duplicate basis label")
        self._deg = {b[0]: int(b[1]) for b in basis}
        self._wt = {b[0]: int(b[2]) for b in basis}
        for lab, w in self._wt.items():
            if w < 1:
                raise AlgebraError(f"weight of {lab} must be >= 1")
        self.W = max(self._wt.values(), default=1) if W is None else W
        self._d = {k: self._check_elem(v) for k, v in (d or {}).items()}
        for k, v in self._d.items():
            self._check_label(k)
            for o in v:
                if self._deg[o] != self._deg[k] - 1:
                    raise AlgebraError(f"d({k}) has wrong degree")
                if self._wt[o] < self._wt[k]:
                    raise AlgebraError(f"d({k}) lowers weight")
        self._ops: Dict[tuple, Element] = {}
        for keys, out in (ops or {}).items():
            keys = tuple(keys)
            if len(keys) == 1:
                raise AlgebraError("arity-1 operations belong to d")
            out = self._check_elem(out)
            for k in keys:
                self._check_label(k)
            degsum = sum(self._deg[k] for k in keys) - 1
            wsum = sum(self._wt[k] for k in keys)
            for o in out:
                if self._deg[o] != degsum:
                    raise AlgebraError(f"l{len(keys)}{keys} has wrong degree")
                if self._wt[o] < max(wsum, 1):
                    raise AlgebraError(f"l{len(keys)}{keys} lowers weight")
            skeys, sign = self._sort(keys)
            if sign == 0:
                if out:
                    raise AlgebraError(f"l{len(keys)}{keys} must vanish by symmetry")
                continue
            self._ops[skeys] = scale(out, sign)

    def _check_label(self, k) -> None:
        if k not in self._deg:
            raise AlgebraError(f"unknown basis label {k!r}")

    def _check_elem(self, x: Mapping) -> Element:
        out = {}
        for k, v in x.items():
            self._check_label(k)
            v = Fraction(v)
            if v:
                out[k] = v
        return out

    def _sort(self, keys: tuple) -> Tuple[tuple, int]:
        order = sorted(range(len(keys)), key=lambda i: self.labels.index(keys[i]))
        degs = [self._deg[k] for k in keys]
        sign = koszul_sign(degs, order)
        skeys = tuple(keys[i] for i in order)
        for a, b in zip(skeys, skeys[1:]):
            if a == b and self._deg[a] % 2:
                return skeys, 0
        return skeys, sign

    def degree(self, key) -> int:
        return self._deg[key]

    def weight(self, key) -> int:
        return self._wt[key]

    def d_basis(self, key) -> Element:
        return self.truncate(self._d.get(key, {}))

    def op_basis(self, keys: tuple) -> Element:
        skeys, sign = self._sort(keys)
        if not sign:
            return {}
        return self.truncate(scale(self._ops.get(skeys, {}), sign))

    def basis(self, degree: int) -> list:
        return [k for k in self.labels if self._deg[k] == degree and self._wt[k] <= self.W]

    def degrees(self) -> List[int]:
        return sorted(set(self._deg.values()))

    # JSON ------------------------------------------------------------------
    def to_json(self) -> dict:
        from .linalg import fmt

        def el(x):
            return [{"label": k, "coeff": fmt(v)} for k, v in sorted(x.items(), key=lambda kv: self.labels.index(kv[0]))]

        return {
            "basis": [{"label": k, "degree": self._deg[k], "weight": self._wt[k]} for k in self.labels],
            "W": self.W,
            "differential": [{"input": k, "output": el(v)} for k, v in sorted(self._d.items()) if v],
            "operations": [{"arity": len(k), "inputs": list(k), "output": el(v)}
                           for k, v in sorted(self._ops.items()) if v and k],
            "curvature": el(self._ops.get((), {})),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "FiniteAlgebra":
        def el(lst):
            return {e["label"]: Fraction(e["coeff"]) for e in lst}

        try:
            basis = [(b["label"], b["degree"], b["weight"]) for b in doc["basis"]]
            d = {e["input"]: el(e["output"]) for e in doc.get("differential", [])}
            ops = {tuple(o["inputs"]): el(o["output"]) for o in doc.get("operations", [])}
            if len(ops) != len(doc.get("operations", [])):
                raise AlgebraError("duplicate operation entry")
            for k in ops:
                if len(k) == 0:
                    raise AlgebraError("curvature goes in the curvature field")
            ops[()] = el(doc.get("curvature", []))
        except (KeyError, TypeError) as e:
            raise AlgebraError(f"malformed algebra document: {e}") from None
        return cls(basis, d, ops, doc.get("W"))


# ------------------------------------------------------- quasi-free algebras

@lru_cache(maxsize=None)
def _dkey(t) -> tuple:
    if isinstance(t, int):
        return (1, t)
    if t == ():
        return (0,)
    return (2,) + tuple(_dkey(c) for c in t)


class QuasiFreeAlgebra(AlgebraPresentation):
    """Free curved absolute algebra on graded generators with a pre-differential.

    Basis: canonical decorated corked trees. A leaf is a generator index, the
    empty tuple is a cork, and a vertex is a tuple of at least two subtrees,
    sorted by a fixed key. Subtree degree is the sum of generator degrees
    minus the number of vertices; weight is the number of vertices plus the
    generator weights. l_n grafts onto a corolla and l_0 is the cork.
    ``dgen[i]`` is the differential of generator i.
    """

    gain = 1

    def __init__(self, generators: Sequence[Tuple[str, int, int]], dgen: Mapping | None = None,
                 W: int = 6):
        self.gens = [(str(a), int(b), int(c)) for a, b, c in generators]
        for lab, _, w in self.gens:
            if w < 1:
                raise AlgebraError(f"generator {lab} needs weight >= 1")
        self.W = W
        self._gdeg = [g[1] for g in self.gens]
        self._gwt = [g[2] for g in self.gens]
        self.dgen: Dict[int, Element] = {}
        for i, v in (dgen or {}).items():
            self.set_dgen(i, v)
        self._dmemo: Dict[object, Element] = {}
        self._canon_memo: Dict[object, tuple] = {}
        self._basis_cache: Dict[int, list] | None = None

    def gen_index(self, label: str) -> int:
        for i, g in enumerate(self.gens):
            if g[0] == label:
                return i
        raise AlgebraError(f"unknown generator {label!r}")

    def set_dgen(self, i: int, v: Mapping) -> None:
        v = {k: Fraction(c) for k, c in v.items() if c}
        for t, _ in v.items():
            if self.degree(t) != self._gdeg[i] - 1:
                raise AlgebraError(f"d of generator {self.gens[i][0]} has wrong degree")
            if self.weight(t) < self._gwt[i]:
                raise AlgebraError(f"d of generator {self.gens[i][0]} lowers weight")
        self.dgen[i] = self.truncate(v)
        if hasattr(self, "_dmemo"):
            self._dmemo.clear()

    # tree bookkeeping ------------------------------------------------------
    def degree(self, t) -> int:
        if isinstance(t, int):
            return self._gdeg[t]
        return sum(self.degree(c) for c in t) - 1

    def weight(self, t) -> int:
        if isinstance(t, int):
            return self._gwt[t]
        return 1 + sum(self.weight(c) for c in t)

    def canon(self, t) -> tuple:
        """(canonical tree, sign); sign 0 when the tree vanishes by symmetry."""
        if isinstance(t, int) or t == ():
            return t, 1
        m = self._canon_memo.get(t)
        if m is not None:
            return m
        sign = 1
        kids = []
        for c in t:
            c2, s = self.canon(c)
            if not s:
                self._canon_memo[t] = (None, 0)
                return None, 0
            sign *= s
            kids.append(c2)
        order = sorted(range(len(kids)), key=lambda i: _dkey(kids[i]))
        degs = [self.degree(c) for c in kids]
        sign *= koszul_sign(degs, order)
        out = tuple(kids[i] for i in order)
        for a, b in zip(out, out[1:]):
            if a == b and self.degree(a) % 2:
                self._canon_memo[t] = (None, 0)
                return None, 0
        self._canon_memo[t] = (out, sign)
        return out, sign

    def gen(self, label_or_index) -> Element:
        i = label_or_index if isinstance(label_or_index, int) else self.gen_index(label_or_index)
        return {i: Fraction(1)} if self._gwt[i] <= self.W else {}

    def op_basis(self, keys: tuple) -> Element:
        if not keys:
            return {(): Fraction(1)} if self.W >= 1 else {}
        if sum(self.weight(k) for k in keys) + 1 > self.W:
            return {}
        t, s = self.canon(tuple(keys))
        return {t: Fraction(s)} if s else {}

    def d_basis(self, t) -> Element:
        m = self._dmemo.get(t)
        if m is not None:
            return m
        if isinstance(t, int):
            out = self.dgen.get(t, {})
        elif t == ():
            out = {}
        else:
            out = self._d_vertex(t)
        out = self.truncate(out)
        self._dmemo[t] = out
        return out

    def _d_vertex(self, t: tuple) -> Element:
        k = len(t)
        degs = [self.degree(c) for c in t]
        acc: Element = {}
        # derivation part
        left = 0
        for i, c in enumerate(t):
            dc = self.d_basis(c)
            if dc:
                xs = [{x: Fraction(1)} for x in t]
                xs[i] = dc
                add_into(acc, self.op(xs), -1 if left % 2 == 0 else 1)
            left += degs[i]
        # l_p(l_q(...), ...) with q in {0, 2, .., k-1}
        for q in [0] + list(range(2, k)):
            for S, rest in unshuffles(k, q):
                eps = koszul_sign(degs, S + rest)
                inner = self.op_basis(tuple(t[i] for i in S))
                if not inner:
                    continue
                xs = [inner] + [{t[i]: Fraction(1)} for i in rest]
                add_into(acc, self.op(xs), -eps)
        return acc

    # basis enumeration -----------------------------------------------------
    def _all_trees(self) -> Dict[int, list]:
        if self._basis_cache is not None:
            return self._basis_cache
        by_w: Dict[int, list] = {w: [] for w in range(1, self.W + 1)}
        for i, w in enumerate(self._gwt):
            if w <= self.W:
                by_w[w].append(i)
        if self.W >= 1:
            by_w[1].append(())
        for w in range(3, self.W + 1):
            pool = sorted((t for ww in range(1, w - 1) for t in by_w[ww]), key=_dkey)
            found = []

            def rec(start: int, left: int, acc: list) -> None:
                if left == 0:
                    if len(acc) >= 2:
                        found.append(tuple(acc))
                    return
                for j in range(start, len(pool)):
                    s = pool[j]
                    ws = self.weight(s)
                    if ws > left:
                        continue
                    if acc and acc[-1] == s and self.degree(s) % 2:
                        continue
                    acc.append(s)
                    rec(j, left - ws, acc)
                    acc.pop()

            rec(0, w - 1, [])
            by_w[w].extend(found)
        self._basis_cache = by_w
        return by_w

    def basis(self, degree: int) -> list:
        out = [t for ts in self._all_trees().values() for t in ts if self.degree(t) == degree]
        out.sort(key=lambda t: (self.weight(t), _dkey(t)))
        return out

    def label(self, t) -> str:
        if isinstance(t, int):
            return self.gens[t][0]
        if t == ():
            return "*"
        return "(" + " ".join(self.label(c) for c in t) + ")"

    def render(self, x: Mapping) -> str:
        from .linalg import fmt
        if not x:
            return "0"
        items = sorted(x.items(), key=lambda kv: (self.weight(kv[0]), _dkey(kv[0])))
        out = ""
        for i, (t, c) in enumerate(items):
            if i:
                out += " - " if c < 0 else " + "
                c = abs(c)
            out += f"{fmt(c)} {self.label(t)}"
        return out

    def parse_tree(self, s: str):
        """Parse ``(a b *)``-style text with generator labels as leaves."""
        toks = s.replace("(", " ( ").replace(")", " ) ").split()
        pos = 0

        def one():
            nonlocal pos
            if pos >= len(toks):
                raise AlgebraError("unexpected end of tree text")
            tok = toks[pos]
            pos += 1
            if tok == "*":
                return ()
            if tok == "(":
                kids = []
                while pos < len(toks) and toks[pos] != ")":
                    kids.append(one())
                if pos >= len(toks):
                    raise AlgebraError("unbalanced parenthesis")
                pos += 1
                if len(kids) < 2:
                    raise AlgebraError("a vertex needs at least two children")
                return tuple(kids)
            if tok == ")":
                raise AlgebraError("unexpected )")
            return self.gen_index(tok)

        t = one()
        if pos != len(toks):
            raise AlgebraError("trailing tokens in tree text")
        return t

    def element(self, terms: Mapping[str, object]) -> Element:
        """Element from ``{tree text: coefficient}``."""
        acc: Element = {}
        for s, c in terms.items():
            t, sign = self.canon(self.parse_tree(s))
            if sign and self.weight(t) <= self.W:
                add_into(acc, {t: Fraction(1)}, Fraction(c) * sign)
        return acc

    def linear_part(self, i: int) -> Element:
        """Weight-preserving generator part of d(generator i)."""
        return {t: c for t, c in self.dgen.get(i, {}).items() if isinstance(t, int)}

    def truncated(self, W: int) -> "QuasiFreeAlgebra":
        out = QuasiFreeAlgebra(self.gens, {}, W)
        for i, v in self.dgen.items():
            out.dgen[i] = out.truncate(v)
        return out


# --------------------------------------------------------------- evaluation

def gamma_eval(alg: AlgebraPresentation, series: Iterable, W: int | None = None) -> Element:
    """Evaluate sum of c * tau(x_1, .., x_n) by recursive composition.

    ``series`` holds (tree, decorations, coefficient) with plain trees from
    :mod:`trees` and decorations as elements (or basis keys) attached to the
    leaves in canonical leaf order.
    """
    acc: Element = {}
    for tree, decos, c in series:
        tree = T.canonical(tree)
        if len(decos) != T.arity(tree):
            raise AlgebraError(f"tree of arity {T.arity(tree)} got {len(decos)} decorations")
        it = iter([x if isinstance(x, Mapping) else {x: Fraction(1)} for x in decos])

        def ev(s):
            if s == T.LEAF:
                return next(it)
            return alg.op([ev(ch) for ch in s])

        add_into(acc, ev(tree), Fraction(c))
    if W is not None:
        acc = {k: v for k, v in acc.items() if alg.weight(k) <= W}
    return acc


def classical_relation(alg: AlgebraPresentation, xs: Sequence[Mapping]) -> Element:
    """Left side of the classical curved relation on homogeneous inputs."""
    n = len(xs)
    degs = [alg.element_degree(x) or 0 for x in xs]
    acc: Element = {}
    for q in range(0, n + 1):
        p = n + 1 - q
        for S, rest in unshuffles(n, q):
            eps = koszul_sign(degs, S + rest)
            ins = [xs[i] for i in S]
            inner = alg.d(ins[0]) if q == 1 else alg.op(ins)
            if not inner:
                continue
            outs = [inner] + [xs[i] for i in rest]
            val = alg.d(outs[0]) if p == 1 else alg.op(outs)
            add_into(acc, val, eps)
    return acc


def curvature_defect(alg: AlgebraPresentation, x: Mapping) -> Element:
    """d(d x) + l_2(l_0, x), which vanishes in a valid algebra."""
    return combine((1, alg.d(alg.d(x))), (1, alg.op([alg.curvature(), x])))


def check_structure(alg: AlgebraPresentation, W: int | None = None, max_arity: int = 4,
                    keys: Sequence | None = None, max_tuples: int = 20000) -> dict:
    """Check the classical relations up to ``max_arity`` inputs.

    ``keys`` restricts the inputs (default: the whole truncated basis; for
    quasi-free algebras the generators, which suffices). Returns a report
    ``{"ok": bool, "failure": None | {...}}``; the arity-1 relation is the
    curvature identity d^2 = -l_2(l_0, -).
    """
    if W is not None and W != alg.W:
        raise AlgebraError("check_structure works at the algebra's own truncation")
    if keys is None:
        if isinstance(alg, QuasiFreeAlgebra):
            keys = [i for i in range(len(alg.gens)) if alg.weight(i) <= alg.W]
        else:
            keys = [k for deg in _degrees(alg) for k in alg.basis(deg)]
    report = {"ok": True, "failure": None, "checked": 0}
    rel0 = alg.d(alg.curvature())
    if rel0:
        report.update(ok=False, failure={"arity": 0, "inputs": [], "witness": rel0})
        return report
    count = 0
    for n in range(1, max_arity + 1):
        from itertools import combinations_with_replacement
        for combo in combinations_with_replacement(keys, n):
            if sum(alg.weight(k) for k in combo) > alg.W:
                continue
            count += 1
            if count > max_tuples:
                break
            val = classical_relation(alg, [{k: Fraction(1)} for k in combo])
            if val:
                report.update(ok=False, failure={"arity": n, "inputs": list(combo), "witness": val})
                report["checked"] = count
                return report
    report["checked"] = count
    return report


def _degrees(alg: AlgebraPresentation) -> List[int]:
    if isinstance(alg, FiniteAlgebra):
        return alg.degrees()
    if hasattr(alg, "degrees"):
        return alg.degrees()
    raise AlgebraError("cannot list degrees of this algebra")


# --------------------------------------------------------- Maurer-Cartan

def mc_residual(alg: AlgebraPresentation, alpha: Mapping, W: int | None = None) -> Element:
    """d alpha + sum_{n != 1} l_n(alpha^n) / n!, truncated."""
    alpha = alg.truncate(alpha)
    if alpha:
        deg = alg.element_degree(alpha)
        if deg != 0:
            raise AlgebraError("Maurer-Cartan elements have degree 0")
        if alg.min_weight(alpha) < 1:
            raise AlgebraError("Maurer-Cartan elements need weight >= 1")
    acc = alg.curvature()
    acc = dict(acc)
    add_into(acc, alg.d(alpha))
    n = 2
    mw = alg.min_weight(alpha) if alpha else alg.W + 1
    while alpha and n * mw + alg.gain <= alg.W:
        add_into(acc, alg.op_power(alpha, n), Fraction(1, factorial(n)))
        n += 1
    if W is not None:
        acc = {k: v for k, v in acc.items() if alg.weight(k) <= W}
    return acc


def mc_verify(alg: AlgebraPresentation, alpha: Mapping, W: int | None = None) -> Tuple[bool, Element]:
    r = mc_residual(alg, alpha, W)
    return (not r), r


def twist(alg: AlgebraPresentation, alpha: Mapping, x: Mapping) -> Element:
    """d^alpha(x) = d x + sum_{n>=2} l_n(alpha^(n-1), x) / (n-1)!."""
    acc = alg.d(x)
    acc = dict(acc)
    if not alpha or not x:
        return acc
    mw = alg.min_weight(alpha)
    xw = alg.min_weight(x)
    k = 1
    while k * mw + xw + alg.gain <= alg.W:
        add_into(acc, alg.op_power(alpha, k, [x]), Fraction(1, factorial(k)))
        k += 1
    return acc


class NotMaurerCartan(AlgebraError):
    def __init__(self, residual: Element):
        self.residual = residual
        super().__init__("element is not Maurer-Cartan")


def twisted_complex(alg: AlgebraPresentation, alpha: Mapping, degrees: Iterable[int],
                    check: bool = True) -> GradedComplex:
    """Matrices of d^alpha between the truncated bases in the given degrees."""
    if check:
        ok, r = mc_verify(alg, alpha)
        if not ok:
            raise NotMaurerCartan(r)
    degrees = sorted(set(degrees))
    C = GradedComplex()
    for k in degrees:
        C.basis[k] = alg.basis(k)
    for k in degrees:
        if k - 1 not in C.basis:
            continue
        rows = {b: i for i, b in enumerate(C.basis[k - 1])}
        M = SparseMatrix(len(C.basis[k - 1]), len(C.basis[k]))
        for j, b in enumerate(C.basis[k]):
            for key, c in twist(alg, alpha, {b: Fraction(1)}).items():
                if key not in rows:
                    raise AlgebraError(f"d^alpha leaves the truncated basis at {key!r}")
                M.add(rows[key], j, c)
        C.d[k] = M
    return C


def twisted_differential(alg: AlgebraPresentation, alpha: Mapping, degrees: Iterable[int]) -> Dict[int, SparseMatrix]:
    C = twisted_complex(alg, alpha, list(degrees))
    return dict(C.d)


def alpha_homology(alg: AlgebraPresentation, alpha: Mapping, degrees: Iterable[int],
                   W: int | None = None) -> dict:
    """Dimensions of the alpha-twisted homology of the truncation.

    Returns ``{"dims": {deg: dim}, "W": truncation}``.
    """
    if W is not None and W != alg.W:
        if isinstance(alg, QuasiFreeAlgebra):
            alg = alg.truncated(W)
        else:
            raise AlgebraError("re-truncation is only supported for quasi-free algebras")
    degrees = sorted(set(degrees))
    C = twisted_complex(alg, alpha, range(min(degrees) - 1, max(degrees) + 2))
    check_square_zero(C, range(min(degrees) - 1, max(degrees) + 1))
    dims = homology_dims(C, degrees)
    return {"dims": dims, "W": alg.W}


# -------------------------------------------------------------------- gauge

def gauge_act(alg: AlgebraPresentation, lam: Mapping, alpha: Mapping, W: int | None = None,
              check: bool = True) -> Element:
    """gamma(1) for d gamma/dt = d^{gamma(t)}(lam), gamma(0) = alpha.

    gamma(t) is kept as a polynomial in t with element coefficients
    ``{power: Element}``; Picard iteration stabilizes after at most W rounds
    because every correction raises weight.
    """
    if check:
        ok, r = mc_verify(alg, alpha)
        if not ok:
            raise NotMaurerCartan(r)
    lam = alg.truncate(lam)
    if lam and alg.element_degree(lam) != 1:
        raise AlgebraError("gauge parameters have degree 1")
    if not lam:
        return alg.truncate(alpha)
    gamma: Dict[int, Element] = {0: alg.truncate(alpha)}
    for _ in range(alg.W + 2):
        rhs = _twist_poly(alg, gamma, lam)
        new: Dict[int, Element] = {0: alg.truncate(alpha)}
        for p, x in rhs.items():
            # integrate t^p from 0 to t
            new[p + 1] = scale(x, Fraction(1, p + 1))
        new = {p: x for p, x in new.items() if x}
        if new == gamma:
            break
        gamma = new
    else:
        raise AlgebraError("gauge iteration did not converge")
    out: Element = {}
    for x in gamma.values():
        add_into(out, x)
    if W is not None:
        out = {k: v for k, v in out.items() if alg.weight(k) <= W}
    return out


def _twist_poly(alg: AlgebraPresentation, gamma: Dict[int, Element], lam: Element) -> Dict[int, Element]:
    """d^{gamma(t)}(lam) as a polynomial in t."""
    out: Dict[int, Element] = {0: dict(alg.d(lam))}
    # tag basis keys with the power of t to reuse op_power on a single element
    flat: Element = {}
    for p, x in gamma.items():
        for k, c in x.items():
            flat[(p, k)] = c
    if not flat:
        return {p: x for p, x in out.items() if x}
    mw = min(alg.weight(k) for _, k in flat)
    lw = alg.min_weight(lam)
    items = sorted(flat.items(), key=lambda kv: alg.weight(kv[0][1]))
    k = 1
    while k * mw + lw + alg.gain <= alg.W:
        # expand l_{k+1}(gamma^k, lam) over multisets of tagged terms
        def rec(start, left, chosen, coef, wsum, mult):
            if left == 0:
                cnt = factorial(k)
                for m in mult.values():
                    cnt //= factorial(m)
                xs = [{key: Fraction(1)} for _, key in chosen] + [lam]
                val = alg.op(xs)
                if val:
                    p = sum(pp for pp, _ in chosen)
                    add_into(out.setdefault(p, {}), val, coef * cnt / factorial(k))
                return
            for i in range(start, len(items)):
                (pp, key), c = items[i]
                w = wsum + alg.weight(key)
                if w + lw + alg.gain > alg.W:
                    break
                chosen.append((pp, key))
                mult[(pp, key)] += 1
                rec(i, left - 1, chosen, coef * c, w, mult)
                mult[(pp, key)] -= 1
                chosen.pop()

        rec(0, k, [], Fraction(1), 0, Counter())
        k += 1
    return {p: x for p, x in out.items() if x}
