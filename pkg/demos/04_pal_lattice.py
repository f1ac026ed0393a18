"""Palindromic Poincare polynomials of F4 as a lattice of tuples.

Writes the two Hasse diagrams as DOT files (render with ``dot -Tpdf``).

    python3 demos/04_pal_lattice.py [out_dir]
"""

import sys
from pathlib import Path

from f4lehmer import build_group, build_pal_lattice, build_weak_code
from f4lehmer.posets import hasse_edges
from f4lehmer.weak import orbit_of, unimodal_elements

f4 = build_group("F4")
code = build_weak_code(f4)
lat = build_pal_lattice(code)
print(f"{len(lat.polynomials)} palindromic h_w, {len(lat.unimodal)} unimodal elements (+ w0)")
print(f"sorted tuples: distributive lattice = {lat.sorted_report.is_distributive}, "
      f"{len(hasse_edges(lat.sorted_poset))} cover edges")
print(f"L1 tuples: lattice = {lat.image_report.is_lattice}, same order as Bruhat = {lat.bruhat_isomorphic}, "
      f"{len(hasse_edges(lat.image_poset))} cover edges")
a, b, m, c = lat.non_sublattice_meets[0]
print(f"not a sublattice of N^4: {a} ^ {b} = {m}, componentwise {c}")

cs = [f4.from_word1([1, 2, 3, 4, s]) for s in (1, 2, 3)]
print("\norbit of c s1 (c = s1 s2 s3 s4):", [code.L1[w] for w in orbit_of(code, 1, cs[0])])
print("representative kept:", code.L1[next(w for w in cs if w in lat.unimodal)])

u2 = unimodal_elements(code, 2)
print(f"with L2 instead only {len(u2)} unimodal elements")

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)
(out / "pal_sorted.dot").write_text(lat.dot_sorted)
(out / "pal_unimodal.dot").write_text(lat.dot_image)
print("\nwrote", out / "pal_sorted.dot", "and", out / "pal_unimodal.dot")
