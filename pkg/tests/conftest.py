import json
from pathlib import Path

import pytest

from f4lehmer.coxeter import build_group
from f4lehmer.embedding import prove_no_lehmer_code
from f4lehmer.weak import build_pal_lattice, build_weak_code

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def groups():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = build_group(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def f4(groups):
    return groups("F4")


@pytest.fixture(scope="session")
def weak(f4):
    return build_weak_code(f4)


@pytest.fixture(scope="session")
def pal(weak):
    return build_pal_lattice(weak, strict=False)


@pytest.fixture(scope="session")
def certificate(f4):
    return prove_no_lehmer_code(f4)


@pytest.fixture(scope="session")
def golden():
    def load(name):
        data = json.loads((DATA / name).read_text())
        nodes = {tuple(x) for x in data["nodes"]}
        edges = {(tuple(a), tuple(b)) for a, b in data["edges"]}
        return nodes, edges

    return load
