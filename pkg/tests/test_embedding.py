import copy
import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f4lehmer.coxeter import aut_group
from f4lehmer.embedding import (
    CertificateFailure,
    EmbeddingMap,
    ObstructionFamily,
    ShapeMismatch,
    admissible_images,
    check_extension,
    count_full_lehmer_codes,
    enumerate_embeddings,
    obstruction_families,
    prove_no_lehmer_code,
    reduce_by_automorphism,
    search_full_lehmer_code,
    verify_certificate,
)
from f4lehmer.posets import FinitePoset, box, truncate_by_rank

N_EMBEDDINGS = 264
N_CLASSES = 66  # regression value fixed after the first run


def _naive(source, t):
    """All rank-preserving injections filtered by cover preservation."""
    by_rank = {}
    for i, r in enumerate(source.rank):
        by_rank.setdefault(r, []).append(i)
    choices = []
    for r in sorted(by_rank):
        layer = [w for w in range(t.size) if t.length[w] == r]
        choices.append([(by_rank[r], p) for p in itertools.permutations(layer, len(by_rank[r]))])
    out = set()
    for combo in itertools.product(*choices):
        a = [None] * len(source)
        for ids, imgs in combo:
            for i, w in zip(ids, imgs):
                a[i] = w
        if all(a[j] in t.lower_covers[a[i]] for i in range(len(source)) for j in source.lower_cover_ids(i)):
            out.add(tuple(a))
    return out


@pytest.mark.parametrize(
    "name,caps,max_rank",
    [("A2", (1, 1), None), ("A2", (1, 2), None), ("B2", (1, 3), None), ("B2", (1, 1), None),
     ("G2", (1, 5), None), ("A3", (1, 2, 3), 2), ("B3", (1, 3, 5), 2)],
)
def test_search_matches_naive_oracle(groups, name, caps, max_rank):
    t = groups(name)
    src = box(caps) if max_rank is None else truncate_by_rank(box(caps), max_rank)
    found = enumerate_embeddings(src, t)
    assert {e.assignment for e in found} == _naive(src, t)
    assert [e.assignment for e in found] == sorted(e.assignment for e in found)
    for e in found:
        assert e.violations(t) == []


def test_trivial_sources(groups):
    t = groups("F4")
    point = FinitePoset.componentwise([(0,)])
    found = enumerate_embeddings(point, t)
    assert len(found) == 1 and found[0].assignment == (0,)
    a1 = groups("A1")
    code = search_full_lehmer_code(a1, (1,))
    assert code.assignment == (0, 1)


@pytest.fixture(scope="module")
def f4_embeddings(f4):
    return enumerate_embeddings(box((1, 5, 7, 11)), f4, max_rank=6)


def test_f4_embedding_count(f4_embeddings, f4):
    assert len(f4_embeddings) == N_EMBEDDINGS
    assert len({e.assignment for e in f4_embeddings}) == N_EMBEDDINGS
    for e in f4_embeddings:
        assert e.violations(f4) == []
        # order preservation follows from covers
        src = e.source
        for i, x in enumerate(src.elements):
            for j in range(len(src)):
                if src.leq(src.elements[j], x):
                    assert f4.leq(e.assignment[j], e.assignment[i])


def test_f4_orbits(f4_embeddings, f4):
    classes = reduce_by_automorphism(f4_embeddings, aut_group(f4))
    assert len(classes) == N_CLASSES
    assert sum(c.size for c in classes) == N_EMBEDDINGS
    assert all(4 % c.size == 0 for c in classes)
    assert sorted(i for c in classes for i in c.members) == list(range(N_EMBEDDINGS))
    for c in classes:
        assert c.representative.assignment == min(f4_embeddings[i].assignment for i in c.members)


def test_reduce_trivial_group(f4_embeddings, f4):
    import numpy as np

    ident = [np.arange(f4.size)]
    classes = reduce_by_automorphism(f4_embeddings[:1], ident)
    assert len(classes) == 1 and classes[0].size == 1
    assert classes[0].representative.assignment == f4_embeddings[0].assignment


@settings(max_examples=5, deadline=None)
@given(st.randoms(use_true_random=False))
def test_search_order_insensitive(f4_embeddings, f4, rnd):
    src = f4_embeddings[0].source
    prio = list(range(len(src)))
    rnd.shuffle(prio)
    again = enumerate_embeddings(src, f4, priority=prio)
    assert [e.assignment for e in again] == [e.assignment for e in f4_embeddings]


@settings(max_examples=10, deadline=None)
@given(st.randoms(use_true_random=False))
def test_search_order_insensitive_small(groups, rnd):
    t = groups("B3")
    src = box((1, 3, 5))
    base = enumerate_embeddings(src, t)
    prio = list(range(len(src)))
    rnd.shuffle(prio)
    assert [e.assignment for e in enumerate_embeddings(src, t, priority=prio)] == [e.assignment for e in base]


def test_bad_priority(f4):
    with pytest.raises(ValueError):
        enumerate_embeddings(box((1, 1)), f4, priority=[0, 0, 1, 2])


def test_obstruction_families():
    C = box((1, 5, 7, 11))
    fams = obstruction_families(C, 7)
    assert len(fams) == sum(1 for x in C if sum(x) == 7)
    by_top = {f.top: f for f in fams}
    assert by_top[(0, 0, 0, 7)].coatoms == ((0, 0, 0, 6),)
    assert len(by_top[(1, 5, 1, 0)].coatoms) == 3
    for f in fams:
        assert all(sum(c) == 6 and C.leq(c, f.top) for c in f.coatoms)


def test_check_extension_monotone_and_sound(f4_embeddings, f4):
    C = box((1, 5, 7, 11))
    fams = obstruction_families(C, 7)
    rng = random.Random(3)
    for e in rng.sample(f4_embeddings, 12):
        for fam in rng.sample(fams, 15):
            w = check_extension(e, fam, f4)
            if w is not None:
                assert f4.length[w] == 7 and all(f4.leq(e(c), w) for c in fam.coatoms)
            for k in range(1, len(fam.coatoms) + 1):
                for sub in itertools.combinations(fam.coatoms, k):
                    sub_fam = ObstructionFamily(fam.top, sub)
                    if w is not None:
                        assert check_extension(e, sub_fam, f4) is not None
                    assert set(admissible_images(e, fam, f4)) <= set(admissible_images(e, sub_fam, f4))
            single = ObstructionFamily(fam.top, fam.coatoms[:1])
            assert check_extension(e, single, f4) is not None


def test_certificate(certificate, f4):
    cert = certificate
    assert cert.embedding_count == N_EMBEDDINGS
    assert len(cert.classes) == N_CLASSES
    assert cert.family_witness_count + cert.hall_witness_count == N_CLASSES
    data = json.loads(json.dumps(cert.to_json(f4)))
    assert verify_certificate(data, f4) == []


def test_certificate_round_trip_is_byte_identical(certificate, f4):
    text = json.dumps(certificate.to_json(f4), indent=1)
    assert json.dumps(json.loads(text), indent=1) == text


def test_certificate_negative_controls(certificate, f4):
    data = certificate.to_json(f4)
    fam_rep = next(r for r in data["representatives"] if r["witness"]["kind"] == "family")
    bad = copy.deepcopy(data)
    rep = next(r for r in bad["representatives"] if r["id"] == fam_rep["id"])
    rep["witness"]["top"][-1] += 1
    assert verify_certificate(bad, f4, recheck_enumeration=False)
    bad = copy.deepcopy(data)
    bad["representatives"].pop()
    assert verify_certificate(bad, f4)
    bad = copy.deepcopy(data)
    hall = next(r for r in bad["representatives"] if r["witness"]["kind"] == "hall")
    hall["witness"]["admissible"].pop()
    assert verify_certificate(bad, f4, recheck_enumeration=False)
    bad = copy.deepcopy(data)
    bad["version"] = 99
    assert verify_certificate(bad, f4)


def test_lower_rank_control_does_extend(f4):
    # 264 embeddings exist at rank 6, so rank 5 maps cannot all be obstructed
    with pytest.raises(CertificateFailure):
        prove_no_lehmer_code(f4, max_rank=5)


def test_full_codes(groups):
    h3 = groups("H3")
    code = search_full_lehmer_code(h3, (1, 5, 9))
    assert code is not None and code.violations(h3) == []
    assert sorted(code.assignment) == list(range(h3.size))
    assert count_full_lehmer_codes(h3, (1, 5, 9)) == 134
    assert search_full_lehmer_code(groups("B2"), (1, 3)) is not None
    assert search_full_lehmer_code(groups("A3"), (1, 2, 3)) is not None
    with pytest.raises(ShapeMismatch):
        search_full_lehmer_code(h3, (1, 5, 8))


def test_f4_has_no_full_code(f4):
    assert search_full_lehmer_code(f4, (1, 5, 7, 11)) is None


def test_embedding_map_helpers(f4_embeddings):
    e = f4_embeddings[0]
    assert e((0, 0, 0, 0)) == 0
    inv = e.inverse()
    assert all(e(x) == w for w, x in inv.items())
    assert isinstance(EmbeddingMap(e.source, e.assignment).as_dict(), dict)
