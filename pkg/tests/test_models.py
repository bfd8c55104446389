import json
from fractions import Fraction as F

import pytest

from abslinf import core as C
from abslinf import integration as I
from abslinf import models as M
from abslinf import trees as T
from abslinf.transfer import simplex_decomposition


def test_load_examples():
    X = M.simplex(2)
    assert len(X.cells) == 7
    S = M.sphere(2)
    assert sorted(S.cells) == ["pt", "top"]
    doc = json.loads(json.dumps(S.to_json()))
    assert M.load_and_validate(doc).to_json() == S.to_json()
    assert M.load_and_validate(json.dumps(doc)).to_json() == S.to_json()


@pytest.mark.parametrize("doc", [
    {"cells": [{"id": "e", "dim": 1, "faces": {"0": "a", "1": "b"}}]},
    {"cells": [{"id": "a", "dim": 0}, {"id": "e", "dim": 1, "faces": {"0": "a"}}]},
    {"cells": [{"id": "a", "dim": 0}, {"id": "e", "dim": 1, "faces": {"0": "a", "1": "e"}}]},
    {"cells": [{"id": "a", "dim": 0}, {"id": "a", "dim": 0}]},
    {"cells": "nope"},
])
def test_load_rejects(doc):
    with pytest.raises(M.SimplicialSetError):
        M.load_and_validate(doc)


def test_inconsistent_restriction_rejected():
    doc = M.simplex(2).to_json()
    for c in doc["cells"]:
        if c["id"] == "v012":
            c["faces"]["0,1"] = "v02"
    with pytest.raises(M.SimplicialSetError):
        M.load_and_validate(doc)


CORES = [T.corolla(2), T.corolla(3), T.corolla(4), T.parse("((||)|)"), T.parse("((||)(||))")]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_coalgebra(n):
    tabs = M.chains_coalgebra(M.sphere(n), CORES)
    top = tabs["top"]
    for tau in CORES:
        got = top.get(tau, ("top",))
        if T.weight(tau) > 1:
            assert got == []
            continue
        m = T.arity(tau)
        want = sorted((tuple("top" if i == j else "pt" for i in range(m)), F(1)) for j in range(m))
        assert sorted(got) == want


def test_point_coalgebra():
    tabs = M.chains_coalgebra(M.point(), CORES[:3])
    for m in (2, 3, 4):
        assert tabs["pt"].get(T.corolla(m), ("pt",)) == [(("pt",) * m, 1)]


def test_edge_of_boundary_matches_interval():
    tabs = M.chains_coalgebra(M.boundary(2), [T.corolla(2), T.corolla(3)])
    for tau in (T.corolla(2), T.corolla(3)):
        want = sorted((tuple({(0,): "v0", (1,): "v1", (0, 1): "v01"}[J] for J in Js), c)
                      for Js, c in simplex_decomposition(1, tau, (0, 1)))
        assert sorted(tabs["v01"].get(tau, ("v01",))) == want


def test_models_examples():
    L, mc0 = M.build_model(M.point(), 4), I.build_mc(0, 4)
    assert L.dgen[0] == mc0.dgen[0]
    S = M.build_model(M.sphere(2), 4)
    assert [g[1] for g in S.gens] == [0, 2]
    assert S.linear_part(1) == {}
    E = M.build_model(M.empty(), 4)
    assert E.gens == [] and E.basis(0) == []
    assert E.basis(-1)  # the cork tower survives


@pytest.mark.parametrize("X", [M.simplex(2), M.boundary(3), M.sphere(2), M.sphere(1), M.point()])
def test_models_satisfy_curvature_identity(X):
    L = M.build_model(X, 4)
    for i in range(len(L.gens)):
        assert not C.curvature_defect(L, {i: F(1)})


def test_minimal_generator_examples():
    assert M.minimal_generators(M.build_model(M.simplex(2), 2)) == {0: 1}
    assert M.minimal_generators(M.build_model(M.sphere(2), 2)) == {0: 1, 2: 1}
    assert M.minimal_generators(M.build_model(M.boundary(3), 2)) == {0: 1, 2: 1}
    with pytest.raises(C.AlgebraError):
        M.minimal_generators(M.sphere(2))


def test_homotopy_groups_point_and_metadata():
    rep = M.homotopy_groups(M.point(), "pt", [1, 2, 3], W=4)
    assert rep["dims"] == {1: 0, 2: 0, 3: 0} and rep["W"] == 4
    rep = M.homotopy_groups(M.sphere(2), "pt", [2, 3], W=4, stabilize=True)
    assert rep["W_check"] == 5 and rep["stable"] is True
    with pytest.raises(C.AlgebraError):
        M.homotopy_groups(M.sphere(2), "top", [2])
    with pytest.raises(C.AlgebraError):
        M.homotopy_groups(M.sphere(2), "pt", [0])


def test_functoriality_of_inclusion():
    X, Y = M.boundary(3), M.simplex(3)
    LX, LY = M.build_model(X, 4), M.build_model(Y, 4)
    values = {i: {LY.cell_index[c]: F(1)} for c, i in LX.cell_index.items()}
    for c, i in LX.cell_index.items():
        lhs = LY.d(values[i])
        rhs = I.pushforward(LY, LX, LX.dgen.get(i, {}), values)
        assert lhs == rhs
