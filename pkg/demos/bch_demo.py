"""Baker-Campbell-Hausdorff from a horn filler.

Fill the (2,1)-horn with edges x and y in the free Lie algebra on two
letters; the missing edge is BCH(x, y). Compare with log(e^x e^y).
"""

from abslinf.integration import bch
from abslinf.lie import bch_oracle, lyndon_words, standard_factorization
from abslinf.linalg import fmt


def bracket(w):
    if len(w) == 1:
        return w
    u, v = standard_factorization(w)
    return f"[{bracket(u)},{bracket(v)}]"


def main(W=5):
    series = bch(W)
    print(f"BCH(x, y) through bracket length {W}, Lyndon basis:")
    for w in lyndon_words("xy", W):
        if w in series:
            print(f"  {fmt(series[w]):>8}  {bracket(w)}")
    print("matches log(e^x e^y):", series == bch_oracle(W))


if __name__ == "__main__":
    main()
