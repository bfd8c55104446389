"""The Maurer-Cartan algebras mc^n, simplices of R(g), horn filling and BCH.

mc^n is quasi-free on generators a_I (I a nonempty subset of [n], degree
|I| - 1, weight 1). Its pre-differential is the one making the universal
element

    Phi = sum_I s_I omega_I (x) a_I,   s_I = (-1)^(k(k-1)/2),  k = |I| - 1,

Maurer-Cartan for the transferred structure on C(Delta^n) (x) mc^n. The sign
s_I makes the linear part of d(a_I) the alternating face sum. Writing
Psi = i Phi + h Q(Psi) with Q(Psi) = sum_{k != 1} l_k(Psi^k)/k!, the MC
equation reads l_1 Phi + p Q(Psi) = 0, which is solved for d(a_I).

Two independent routes produce d(a_I): :func:`build_mc` assembles it from
the decomposition tables, and :func:`build_mc_fixed_point` runs the fixed
point literally in Omega_n (x) F.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from . import dupont as D
from . import transfer as TR
from . import trees as T
from .core import (AlgebraError, AlgebraPresentation, Element, QuasiFreeAlgebra, add_into,
                   gamma_eval, mc_verify, scale)


def subset_label(I: Sequence[int]) -> str:
    return "a" + "".join(str(i) for i in I) if max(I) < 10 else "a" + "_".join(str(i) for i in I)


def s_sign(I: Sequence[int]) -> int:
    k = len(I) - 1
    return -1 if (k * (k - 1) // 2) % 2 else 1


def _planar_signs(tau, labs: Sequence[tuple]) -> Tuple[int, object]:
    """Sign relating the literal l-composite to mu_tau (x) tau(a), and the planar tree.

    Returns (sign, planar decorated tree with subset labels at the leaves).
    """
    it = iter(labs)

    def ev(s):
        # (omega-degree e, input degree sum, sign sigma * kappa, planar tree)
        if s == T.LEAF:
            J = next(it)
            e = -(len(J) - 1)
            return e, e, 1, J
        kids = [ev(c) for c in s]
        sign = 1
        es = []
        left_inputs = 0
        for c, (e, din, sg, _) in zip(s, kids):
            sign *= sg
            if c != T.LEAF:
                # kappa: h passes the inputs of earlier sibling blocks
                if left_inputs % 2:
                    sign = -sign
                e = e + 1
            es.append(e)
            left_inputs += din
        tot = sum(es)
        cross = 0
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                cross += es[i] * es[j]
        if (tot + cross) % 2:
            sign = -sign
        return tot, left_inputs, sign, tuple(k[3] for k in kids)

    _, _, sign, planar = ev(tau)
    return sign, planar


def _face_part(I: tuple) -> Dict[tuple, int]:
    out: Dict[tuple, int] = {}
    if len(I) < 2:
        return out
    for j in range(len(I)):
        J = I[:j] + I[j + 1:]
        out[J] = (-1 if j % 2 else 1) * s_sign(J)
    return out


def build_mc(n: int, W: int, targets: Iterable[tuple] | None = None,
             allowed: Iterable[tuple] | None = None) -> QuasiFreeAlgebra:
    """mc^n truncated at weight W, from the decomposition tables.

    ``targets`` limits which generators get their differential (default: all)
    and ``allowed`` limits the subsets that may decorate leaves; both exist to
    keep specialised computations (horn filling, sphere models) small.
    """
    if n < 0:
        raise AlgebraError("negative dimension")
    subs = D.subsets(n)
    index = {I: i for i, I in enumerate(subs)}
    alg = QuasiFreeAlgebra([(subset_label(I), len(I) - 1, 1) for I in subs], {}, W)
    allowed_t = None if allowed is None else tuple(sorted({tuple(sorted(J)) for J in allowed}))
    targets = subs if targets is None else [tuple(sorted(I)) for I in targets]
    pq: Dict[tuple, Element] = {I: {} for I in targets}
    # the cork at the root: p(1) = sum of vertices
    for I in targets:
        if len(I) == 1 and W >= 1:
            add_into(pq[I], {(): Fraction(1)})
    # a cork-free tree with m leaves has at most m - 1 vertices
    for v in range(1, W):
        for m in range(max(2, v + 1), W - v + 1):
            for tau in T.enumerate_trees(m, v, allow_corks=False):
                aut = T.symmetry_coefficient(tau)
                dec = TR._decomposition(n, tau, allowed_t)
                for I in targets:
                    for labs, lam in dec.get(I, ()):
                        sign, planar = _planar_signs(tau, labs)
                        coef = Fraction(sign, aut) * lam
                        for J in labs:
                            coef *= s_sign(J)

                        def deco(s):
                            if isinstance(s, tuple) and s and isinstance(s[0], int):
                                return index[s]
                            return tuple(deco(c) for c in s)

                        t, ks = alg.canon(deco(planar))
                        if ks:
                            add_into(pq[I], {t: Fraction(ks)}, coef)
    for I in targets:
        k = len(I) - 1
        total: Element = {}
        for J, c in _face_part(I).items():
            add_into(total, {index[J]: Fraction(1)}, c)
        add_into(total, pq[I])
        sign = -((-1) ** k) * s_sign(I)
        alg.set_dgen(index[I], scale(total, sign))
    alg.subsets = subs
    alg.index = index
    return alg


# ------------------------------------------------------- literal fixed point

def _lk(alg: QuasiFreeAlgebra, n: int, parts: Sequence[Dict]) -> Dict:
    """l_k on Omega_n (x) F for homogeneous-by-key dicts {(tree, form degree): PolyForm}."""
    out: Dict = {}
    for combo in product(*[list(p.items()) for p in parts]):
        rs = [c[1] for c in combo]
        xs = [c[0][0] for c in combo]
        es = [c[0][1] for c in combo]
        fs = [alg.degree(x) for x in xs]
        sign = -1 if sum(es) % 2 else 1
        for i in range(len(combo)):
            for j in range(i):
                if es[i] % 2 and fs[j] % 2:
                    sign = -sign
        if sum(alg.weight(x) for x in xs) + 1 > alg.W:
            continue
        t, ks = alg.canon(tuple(xs))
        if not ks:
            continue
        form = D.wedge_product(n, rs)
        if form.is_zero():
            continue
        key = (t, sum(es))
        prev = out.get(key)
        val = form.scale(sign * ks)
        out[key] = val if prev is None else prev + val
    return {k: v for k, v in out.items() if not v.is_zero()}


def _compositions(total: int, k: int) -> Iterable[tuple]:
    if k == 1:
        if total >= 1:
            yield (total,)
        return
    for a in range(1, total - k + 2):
        for rest in _compositions(total - a, k - 1):
            yield (a,) + rest


def build_mc_fixed_point(n: int, W: int) -> QuasiFreeAlgebra:
    """mc^n by running Psi = i Phi + h Q(Psi) literally (small n and W only)."""
    subs = D.subsets(n)
    index = {I: i for i, I in enumerate(subs)}
    alg = QuasiFreeAlgebra([(subset_label(I), len(I) - 1, 1) for I in subs], {}, W)
    psi: Dict[int, Dict] = {1: {}}
    for I in subs:
        psi[1][(index[I], -(len(I) - 1))] = D.whitney(n, I).scale(s_sign(I))
    Q: Dict[int, Dict] = {1: {((), 0): D.PolyForm.one(n)}}
    for w in range(2, W + 1):
        acc: Dict = {}
        for k in range(2, w):
            for comp in _compositions(w - 1, k):
                if any(c not in psi for c in comp):
                    continue
                val = _lk(alg, n, [psi[c] for c in comp])
                for key, f in val.items():
                    f = f.scale(Fraction(1, factorial(k)))
                    acc[key] = acc[key] + f if key in acc else f
        Q[w] = {k: v for k, v in acc.items() if not v.is_zero()}
        psi[w] = {}
        for (t, e), f in Q[w].items():
            hf = D.dupont_homotopy(n, f)
            if not hf.is_zero():
                psi[w][(t, e + 1)] = hf
    pq: Dict[tuple, Element] = {I: {} for I in subs}
    for w, part in Q.items():
        for (t, e), f in part.items():
            for I, c in D.elementary_projection(n, f).items():
                add_into(pq[I], {t: c})
    for I in subs:
        k = len(I) - 1
        total: Element = {}
        for J, c in _face_part(I).items():
            add_into(total, {index[J]: Fraction(1)}, c)
        add_into(total, pq[I])
        alg.set_dgen(index[I], scale(total, -((-1) ** k) * s_sign(I)))
    alg.subsets = subs
    alg.index = index
    return alg


# ------------------------------------------------------------ simplices

def pushforward(g: AlgebraPresentation, mc: QuasiFreeAlgebra, x: Mapping, values: Mapping[int, Element]) -> Element:
    """Image of an element of mc under the algebra map a_I -> values[I]."""
    memo: Dict[object, Element] = {}

    def ev(t) -> Element:
        if t in memo:
            return memo[t]
        if isinstance(t, int):
            out = values.get(t, {})
        elif t == ():
            out = g.curvature()
        else:
            kids = [ev(c) for c in t]
            out = {} if any(not k for k in kids) else g.op(kids)
        memo[t] = out
        return out

    acc: Element = {}
    for t, c in x.items():
        add_into(acc, ev(t), c)
    return g.truncate(acc)


def _mc_weight(g: AlgebraPresentation) -> int:
    # trees with m leaves have at most m - 1 vertices; leaves weigh >= 1 in g
    return g.W if g.gain >= 1 else 2 * g.W - 1


def _normalize(phi: Mapping) -> Dict[tuple, Element]:
    out = {}
    for I, v in phi.items():
        I = tuple(sorted(I))
        out[I] = {k: Fraction(c) for k, c in v.items() if c}
    return out


def simplex_residuals(g: AlgebraPresentation, n: int, phi: Mapping, W: int | None = None,
                      targets: Iterable[tuple] | None = None, mc: QuasiFreeAlgebra | None = None) -> Dict[tuple, Element]:
    """d_g(phi(a_I)) - phi(d a_I) for each target generator."""
    phi = _normalize(phi)
    subs = D.subsets(n)
    for I in phi:
        if I not in subs:
            raise AlgebraError(f"{I} is not a face of the {n}-simplex")
    for I, v in phi.items():
        if v and g.element_degree(v) != len(I) - 1:
            raise AlgebraError(f"value on {I} must have degree {len(I) - 1}")
    allowed = [I for I in subs if phi.get(I)]
    targets = subs if targets is None else [tuple(sorted(I)) for I in targets]
    if mc is None:
        mc = build_mc(n, _mc_weight(g), targets=targets, allowed=allowed or [subs[0]])
    values = {mc.index[I]: v for I, v in phi.items()}
    out = {}
    for I in targets:
        lhs = g.d(phi.get(I, {}))
        rhs = pushforward(g, mc, mc.dgen.get(mc.index[I], {}), values)
        r = add_into(dict(lhs), rhs, -1)
        if W is not None:
            r = {k: v for k, v in r.items() if g.weight(k) <= W}
        out[I] = r
    return out


def is_simplex(g: AlgebraPresentation, n: int, phi: Mapping, W: int | None = None) -> Tuple[bool, Dict[tuple, Element]]:
    res = simplex_residuals(g, n, phi, W)
    return all(not r for r in res.values()), res


def constant_simplex(n: int, alpha: Mapping) -> Dict[tuple, Element]:
    return {I: (dict(alpha) if len(I) == 1 else {}) for I in D.subsets(n)}


class HornError(AlgebraError):
    pass


def horn_fill(g: AlgebraPresentation, n: int, k: int, horn: Mapping, y: Mapping | None = None,
              W: int | None = None) -> Dict[tuple, Element]:
    """Fill the k-th horn: returns the full assignment with the missing face computed."""
    if not 0 <= k <= n or n < 1:
        raise HornError(f"no horn ({n}, {k})")
    subs = D.subsets(n)
    top = tuple(range(n + 1))
    F = tuple(i for i in range(n + 1) if i != k)
    phi = _normalize(horn)
    phi.pop(F, None)
    phi[top] = {kk: Fraction(c) for kk, c in (y or {}).items() if c}
    for I in subs:
        phi.setdefault(I, {})
    # constraints that do not involve the missing face or the top
    known = [I for I in subs if not set(F) <= set(I)]
    bad = {I: r for I, r in simplex_residuals(g, n, phi, W, targets=known).items() if r}
    if bad:
        raise HornError(f"inconsistent horn at {sorted(bad)}")
    allowed = [I for I in subs if phi.get(I)] + [F]
    mc = build_mc(n, _mc_weight(g), targets=[top], allowed=allowed)
    dtop = mc.dgen[mc.index[top]]
    cF = dtop.get(mc.index[F])
    rest = {t: c for t, c in dtop.items() if t != mc.index[F]}
    lhs = g.d(phi[top])
    cur: Element = {}
    for _ in range(g.W + 2):
        values = {mc.index[I]: v for I, v in phi.items()}
        values[mc.index[F]] = cur
        new = scale(add_into(dict(lhs), pushforward(g, mc, rest, values), -1), 1 / cF)
        new = g.truncate(new)
        if new == cur:
            break
        cur = new
    else:
        raise HornError("fixed point iteration did not converge")
    phi[F] = cur
    return phi


# ------------------------------------------------------------------ BCH

# l_2 = BRACKET_SCALE * [, ] on the shifted free Lie algebra, fixed by the
# weight-2 term of the Lambda^2_1 filler
BRACKET_SCALE = -1


def bch(W: int, scale_: int | None = None) -> Dict[str, Fraction]:
    """Lyndon coordinates of the Lambda^2_1 filler on a_01 = x, a_12 = y."""
    from .lie import free_lie_algebra

    if W < 1:
        raise AlgebraError("W must be >= 1")
    g = free_lie_algebra("xy", W, BRACKET_SCALE if scale_ is None else scale_)
    horn = {(0, 1): {"x": 1}, (1, 2): {"y": 1}}
    phi = horn_fill(g, 2, 1, horn, None)
    return dict(phi[(0, 2)])
