"""Two maps F4 -> N^4 that together turn every lower interval into a multicomplex.

    python3 demos/03_weak_code.py
"""

from collections import Counter

from f4lehmer import build_group, build_weak_code, is_m_sequence, multicomplex_for_interval, verify_weak_code
from f4lehmer.posets import f_vector
from f4lehmer.qpoly import poincare_polynomial

f4 = build_group("F4")
code = build_weak_code(f4)
report = verify_weak_code(code)
print("conditions:", report.condition1, report.condition2, report.condition3)
print("which (map, automorphism) first works, per element:")
for (i, phi), n in sorted(Counter(report.witnesses).items()):
    print(f"  L{i} after {phi:<9} {n:4d}")

w = f4.from_word1([4, 3, 1, 2, 3, 4, 2, 1])
mc = multicomplex_for_interval(code, w)
print(f"\n[e, w] for w = s4 s3 s1 s2 s3 s4 s2 s1: {len(mc.points)} points, L1(w) = {code.L1[w]}")
print("maximal tuples:", *mc.maxima)
print("f-vector:", f_vector(mc.points), "= coefficients of h_w:", poincare_polynomial(f4, w).to_json())

# every h_w is therefore an M-sequence
print("\nall 1152 Poincare polynomials are M-sequences:",
      all(is_m_sequence(poincare_polynomial(f4, v).to_json()) for v in range(f4.size)))
print("but 1 + 3q + 6q^2 + 12q^3 is not:", is_m_sequence([1, 3, 6, 12]))
