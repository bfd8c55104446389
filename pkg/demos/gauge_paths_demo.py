"""Paths are gauges.

Flow the vertex Maurer-Cartan element of L(S^2) along a degree-one element
and check that (start, end, parameter) is a 1-simplex. A perturbed endpoint
is not.
"""

from fractions import Fraction

from abslinf.core import gauge_act, mc_verify
from abslinf.integration import is_simplex
from abslinf.models import build_model, sphere


def main():
    L = build_model(sphere(2), 4)
    alpha = {L.cell_index["pt"]: Fraction(1)}
    lam = {k: Fraction(1) for k in L.basis(1)[:2]}
    print("lambda =", L.render(lam))
    beta = gauge_act(L, lam, alpha)
    print("lambda . alpha =", L.render(beta))
    print("Maurer-Cartan:", mc_verify(L, beta)[0])
    print("1-simplex:", is_simplex(L, 1, {(0,): alpha, (1,): beta, (0, 1): lam})[0])
    off = dict(beta)
    off[L.cell_index["pt"]] += 1
    print("perturbed endpoint is a 1-simplex:", is_simplex(L, 1, {(0,): alpha, (1,): off, (0, 1): lam})[0])


if __name__ == "__main__":
    main()
