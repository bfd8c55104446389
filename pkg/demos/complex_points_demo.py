"""An algebra with no rational points but two Gaussian ones.

g has y in degree 0 and z in degree -1 with curvature z and l_2(y, y) = 2z.
A candidate lambda * y is Maurer-Cartan when lambda^2 = -1.
"""

from abslinf.convolution import CommutativeAlgebra, g_complex, mc_system, scalar_extension
from abslinf.core import mc_verify


def main():
    g = g_complex()
    over_q = scalar_extension(g, CommutativeAlgebra.rationals())
    _, eqs = mc_system(over_q)
    print("MC system over Q:", [f"{e} = 0" for e in eqs.values()])
    print("rational candidates -3..3 that work:",
          [lam for lam in range(-3, 4) if mc_verify(over_q, {("1", "y"): lam})[0]])
    over_i = scalar_extension(g, CommutativeAlgebra.quadratic(-1))
    _, eqs = mc_system(over_i)
    print("MC system over Q[x]/(x^2+1):", [f"{e} = 0" for e in eqs.values()])
    for s in (1, -1):
        print(f"  {s:+d} x.y is Maurer-Cartan:", mc_verify(over_i, {("x", "y"): s})[0])


if __name__ == "__main__":
    main()
