"""Build Coxeter group tables and look at Bruhat order.

    python3 demos/01_group_tables.py
"""

from f4lehmer import build_group, poincare_polynomial
from f4lehmer.cli import exponents
from f4lehmer.coxeter import aut_group, lower_interval, psi

for name in ("A3", "B3", "H3", "F4"):
    t = build_group(name)
    print(f"{name:>3}: {t.size:5d} elements, longest length {int(t.length.max()):2d}, "
          f"{len(t.reflections):2d} reflections, exponents {exponents(t)}")

f4 = build_group("F4")
print("\nThe length generating function of F4 factors into q-analogues:")
print("  ", poincare_polynomial(f4, f4.w0))

# words are 1-based; the table stores the lex-least reduced word of each element
w = f4.from_word1([4, 3, 1, 2, 3, 4, 2, 1])
print(f"\nw = s4 s3 s1 s2 s3 s4 s2 s1 is stored as {f4.word_str(w)!r} (length {f4.length[w]})")
print(f"|[e, w]| = {len(lower_interval(f4, w))}")
print("h_w =", poincare_polynomial(f4, w))
print("lower covers of w:", [f4.word_str(u) for u in f4.lower_covers[w]])

# the diagram flip s1<->s4, s2<->s3 and inversion generate the order automorphisms used later
print("\npsi(s1 s2) =", f4.word_str(psi(f4, f4.from_word1([1, 2]))))
print("w is fixed by every automorphism:", all(int(phi[w]) == w for phi in aut_group(f4)))
