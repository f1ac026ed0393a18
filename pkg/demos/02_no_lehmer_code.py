"""Why F4 has no Lehmer code, and a sanity check on H3.

A Lehmer code would restrict to a cover-preserving injection from the ranks
0..6 of the box [1]x[5]x[7]x[11] into Bruhat order.  We list all of them,
fold them up to symmetry, and check that none extends to rank 7.

    python3 demos/02_no_lehmer_code.py [certificate.json]
"""

import json
import sys
import time

from f4lehmer import build_group, prove_no_lehmer_code, search_full_lehmer_code, verify_certificate
from f4lehmer.embedding import count_full_lehmer_codes

f4 = build_group("F4")
t0 = time.perf_counter()
cert = prove_no_lehmer_code(f4)
print(f"{cert.embedding_count} embeddings of the rank<=6 box, {len(cert.classes)} classes "
      f"up to automorphism ({time.perf_counter() - t0:.2f}s)")
print(f"  {cert.family_witness_count} classes: one rank-7 box element whose lower covers "
      "have no common upper bound of length 7")
print(f"  {cert.hall_witness_count} classes: every rank-7 element alone is fine, but there are "
      "more of them than available images (Hall's condition fails)")

data = cert.to_json(f4)
hall = next(r for r in data["representatives"] if r["witness"]["kind"] == "hall")
print(f"\nexample Hall witness: {len(hall['witness']['families'])} families share only "
      f"{len(hall['witness']['admissible'])} admissible images {hall['witness']['admissible']}")

out = sys.argv[1] if len(sys.argv) > 1 else None
if out:
    with open(out, "w") as fh:
        json.dump(data, fh, indent=1)
    print("certificate written to", out)
print("replay:", verify_certificate(json.loads(json.dumps(data)), f4) or "ok")

h3 = build_group("H3")
code = search_full_lehmer_code(h3, (1, 5, 9))
print(f"\nH3 against [1]x[5]x[9]: a full code exists ({count_full_lehmer_codes(h3, (1, 5, 9))} in all)")
for x, w in list(zip(code.source.elements, code.assignment))[:6]:
    print(f"  {x} -> {h3.word_str(w) or 'e'}")
print("F4 full search:", search_full_lehmer_code(f4, (1, 5, 7, 11)))
