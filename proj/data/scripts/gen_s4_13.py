"""Write an integral echelon basis of S_4(Gamma_0(13)) as data/s4_13.basis.

Coefficients come from PARI's modular forms package (cypari2)."""
import sys
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path

import cypari2

PREC = 400


def echelon(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    out = []
    col = 0
    while rows and col < len(rows[0]):
        piv = next((r for r in rows if r[col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows.remove(piv)
        piv = [x / piv[col] for x in piv]
        rows = [[a - r[col] * b for a, b in zip(r, piv)] for r in rows]
        for i, r in enumerate(out):
            if r[col] != 0:
                out[i] = [a - r[col] * b for a, b in zip(r, piv)]
        out.append(piv)
        col += 1
    return out


def main():
    pari = cypari2.Pari()
    pari.allocatemem(512 * 10**6)
    mf = pari("mfinit([13,4],1)")
    basis = pari.mfbasis(mf)
    rows = [[Fraction(int(pari.numerator(c)), int(pari.denominator(c))) for c in pari.mfcoefs(f, PREC - 1)] for f in basis]
    ints = []
    for r in echelon(rows):
        d = lcm(*(x.denominator for x in r))
        v = [int(x * d) for x in r]
        g = 0
        for x in v:
            g = gcd(g, x)
        ints.append([x // g for x in v])
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "s4_13.basis"
    with out.open("w") as fh:
        fh.write("# S_4(Gamma_0(13)), echelon form, coefficients of q^0..q^%d\n" % (PREC - 1))
        fh.write("13 4 %d %d\n" % (len(ints), PREC))
        for v in ints:
            fh.write(" ".join(map(str, v)) + "\n")


if __name__ == "__main__":
    main()
