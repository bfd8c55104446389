"""Rational homotopy of spheres from their models L(S^n).

S^n is one vertex plus one n-cell. Its model has two generators; the
vertex is a Maurer-Cartan element and the twisted homology at it gives
pi_*(S^n) (x) Q through the truncation weight.
"""

from abslinf.models import build_model, homotopy_groups, minimal_generators, simplicial_homology, sphere


def main(W=6):
    for n in (2, 3):
        X = sphere(n)
        L = build_model(X, 4)
        print(f"S^{n}")
        for i, (lab, deg, _) in enumerate(L.gens):
            print(f"  d({lab}) = {L.render(L.dgen.get(i, {}))}   [degree {deg}]")
        print("  minimal generators:", minimal_generators(L), " homology:", simplicial_homology(X))
        rep = homotopy_groups(X, "pt", range(n, n + 3), W=W)
        print(f"  pi_* at W = {rep['W']}:", rep["dims"])
    print("classically: pi_2, pi_3 of S^2 are Q; S^3 only pi_3")


if __name__ == "__main__":
    main()
