"""Finite simplicial sets, their chains coalgebra and rational models L(X).

A simplicial set is given by its nondegenerate cells. Each cell of dimension
m assigns to every nonempty I of [m] either a cell of dimension |I| - 1 or
a degeneracy marker pointing at a lower-dimensional cell. L(X) is the
quasi-free algebra on one generator per cell whose differential is pushed
forward from mc^m along each cell's characteristic map; degenerate faces
go to zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from . import dupont as D
from . import transfer as TR
from . import trees as T
from .core import AlgebraError, QuasiFreeAlgebra, add_into, alpha_homology
from .integration import build_mc
from .linalg import GradedComplex, SparseMatrix, homology_dims


class SimplicialSetError(ValueError):
    pass


@dataclass(frozen=True)
class Degenerate:
    target: str


@dataclass
class Cell:
    id: str
    dim: int
    faces: Dict[tuple, object]   # I -> cell id or Degenerate


@dataclass
class SimplicialSetData:
    cells: Dict[str, Cell] = field(default_factory=dict)

    def ordered(self) -> List[Cell]:
        return sorted(self.cells.values(), key=lambda c: (c.dim, c.id))

    def vertices(self) -> List[str]:
        return [c.id for c in self.ordered() if c.dim == 0]

    def image(self, cell: str, I: tuple):
        return self.cells[cell].faces[tuple(I)]

    def to_json(self) -> dict:
        out = []
        for c in self.ordered():
            faces = {}
            for I, v in sorted(c.faces.items(), key=lambda kv: (len(kv[0]), kv[0])):
                if len(I) == c.dim + 1:
                    continue
                faces[",".join(map(str, I))] = {"degenerate": v.target} if isinstance(v, Degenerate) else v
            out.append({"id": c.id, "dim": c.dim, "faces": faces})
        return {"cells": out}


def _parse_subset(s: str, m: int) -> tuple:
    try:
        I = tuple(sorted(int(x) for x in s.replace(" ", "").split(",") if x != ""))
    except ValueError:
        raise SimplicialSetError(f"bad subset key {s!r}") from None
    if not I or len(set(I)) != len(I) or I[0] < 0 or I[-1] > m:
        raise SimplicialSetError(f"subset {s!r} out of range for dimension {m}")
    return I


def load_and_validate(doc) -> SimplicialSetData:
    """Parse and validate a simplicial-set document (dict or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise SimplicialSetError(f"invalid JSON: {e}") from None
    if not isinstance(doc, Mapping) or not isinstance(doc.get("cells"), list):
        raise SimplicialSetError("document needs a 'cells' list")
    X = SimplicialSetData()
    raw = []
    for entry in doc["cells"]:
        try:
            cid, m = str(entry["id"]), int(entry["dim"])
        except (KeyError, TypeError, ValueError):
            raise SimplicialSetError(f"cell entry needs id and dim: {entry!r}") from None
        if m < 0:
            raise SimplicialSetError(f"cell {cid} has negative dimension")
        if cid in X.cells:
            raise SimplicialSetError(f"duplicate cell id {cid}")
        X.cells[cid] = Cell(cid, m, {})
        raw.append((cid, m, entry.get("faces", {}) or {}))
    for cid, m, faces in raw:
        cell = X.cells[cid]
        for key, v in faces.items():
            I = _parse_subset(key, m)
            if isinstance(v, Mapping):
                if "degenerate" not in v:
                    raise SimplicialSetError(f"cell {cid}, face {key}: unknown marker {v!r}")
                cell.faces[I] = Degenerate(str(v["degenerate"]))
            else:
                cell.faces[I] = str(v)
        cell.faces[tuple(range(m + 1))] = cid
        if m == 0:
            cell.faces[(0,)] = cid
    for cell in X.cells.values():
        _validate_cell(X, cell)
    return X


def _validate_cell(X: SimplicialSetData, cell: Cell) -> None:
    m = cell.dim
    for I in D.subsets(m):
        if I not in cell.faces:
            raise SimplicialSetError(f"cell {cell.id}: face {list(I)} is not assigned")
        v = cell.faces[I]
        k = len(I) - 1
        if isinstance(v, Degenerate):
            if v.target not in X.cells:
                raise SimplicialSetError(f"cell {cell.id}: face {list(I)} degenerates onto missing cell {v.target}")
            if X.cells[v.target].dim >= k:
                raise SimplicialSetError(f"cell {cell.id}: face {list(I)} degenerates onto a cell that is too big")
            if k == 0:
                raise SimplicialSetError(f"cell {cell.id}: vertex {I[0]} cannot be degenerate")
            continue
        if v not in X.cells:
            raise SimplicialSetError(f"cell {cell.id}: face {list(I)} references missing cell {v}")
        if X.cells[v].dim != k:
            raise SimplicialSetError(f"cell {cell.id}: face {list(I)} has the wrong dimension")
    # restriction of I's assignment must agree with the face cell's own assignments
    for I in D.subsets(m):
        v = cell.faces[I]
        for r in range(1, len(I)):
            for pos in combinations(range(len(I)), r):
                J = tuple(I[p] for p in pos)
                w = cell.faces[J]
                if isinstance(v, Degenerate):
                    allowed = _closure(X, v.target)
                    tgt = w.target if isinstance(w, Degenerate) else w
                    if tgt not in allowed:
                        raise SimplicialSetError(
                            f"cell {cell.id}: face {list(J)} leaves the degenerate image of {list(I)}")
                    continue
                expect = X.cells[v].faces[pos]
                if expect != w:
                    raise SimplicialSetError(
                        f"cell {cell.id}: face {list(J)} is {w!r} but face {list(I)} = {v} says {expect!r}")


def _closure(X: SimplicialSetData, cid: str) -> set:
    out = set()
    for v in X.cells[cid].faces.values():
        out.add(v.target if isinstance(v, Degenerate) else v)
    return out


# ---------------------------------------------------------- standard examples

def simplex(n: int) -> SimplicialSetData:
    cells = []
    for I in D.subsets(n):
        faces = {}
        for J in D.subsets(len(I) - 1):
            faces[",".join(map(str, J))] = _name(tuple(I[j] for j in J))
        cells.append({"id": _name(I), "dim": len(I) - 1, "faces": faces})
    return load_and_validate({"cells": cells})


def boundary(n: int) -> SimplicialSetData:
    X = simplex(n)
    doc = X.to_json()
    doc["cells"] = [c for c in doc["cells"] if c["dim"] < n]
    return load_and_validate(doc)


def sphere(n: int) -> SimplicialSetData:
    """Delta^n / boundary: one vertex and one n-cell."""
    if n < 1:
        raise SimplicialSetError("sphere dimension must be >= 1")
    faces = {}
    for I in D.subsets(n):
        if len(I) == 1:
            faces[",".join(map(str, I))] = "pt"
        elif len(I) < n + 1:
            faces[",".join(map(str, I))] = {"degenerate": "pt"}
    return load_and_validate({"cells": [{"id": "pt", "dim": 0}, {"id": "top", "dim": n, "faces": faces}]})


def point() -> SimplicialSetData:
    return load_and_validate({"cells": [{"id": "pt", "dim": 0}]})


def empty() -> SimplicialSetData:
    return load_and_validate({"cells": []})


def _name(I: tuple) -> str:
    return "v" + "".join(map(str, I)) if max(I) < 10 else "v" + "_".join(map(str, I))


# ------------------------------------------------------------ homology

def cellular_complex(X: SimplicialSetData) -> GradedComplex:
    """Normalized chains: nondegenerate cells, boundary = alternating faces."""
    C = GradedComplex()
    cells = X.ordered()
    for c in cells:
        C.basis.setdefault(c.dim, []).append(c.id)
    for k, ids in C.basis.items():
        if k == 0:
            continue
        rows = {cid: i for i, cid in enumerate(C.basis.get(k - 1, []))}
        M = SparseMatrix(len(rows), len(ids))
        for j, cid in enumerate(ids):
            full = tuple(range(k + 1))
            for l in range(k + 1):
                f = X.image(cid, full[:l] + full[l + 1:])
                if isinstance(f, Degenerate):
                    continue
                M.add(rows[f], j, -1 if l % 2 else 1)
        C.d[k] = M
    return C


def simplicial_homology(X: SimplicialSetData) -> Dict[int, int]:
    C = cellular_complex(X)
    if not C.basis:
        return {}
    top = max(C.basis)
    dims = homology_dims(C, range(0, top + 1))
    return {k: v for k, v in dims.items() if v}


# -------------------------------------------------------- chains coalgebra

def chains_coalgebra(X: SimplicialSetData, trees: Iterable, max_dim: int | None = None) -> Dict[str, TR.DecompositionTable]:
    """Delta_tau(a_sigma) for each cell, pushed forward from the simplex tables.

    Returns one table per cell id; factor subsets are replaced by the image
    cell ids, and terms with a degenerate factor are dropped.
    """
    trees = [T.canonical(t) for t in trees]
    out: Dict[str, TR.DecompositionTable] = {}
    for c in X.ordered():
        if max_dim is not None and c.dim > max_dim:
            continue
        m = c.dim
        allowed = [J for J in D.subsets(m) if not isinstance(c.faces[J], Degenerate)]
        top = tuple(range(m + 1))
        tab = TR.DecompositionTable(m)
        for tau in trees:
            acc: Dict[tuple, Fraction] = {}
            for labs, lam in TR.simplex_decomposition(m, tau, top, allowed=allowed):
                key = tuple(c.faces[J] for J in labs)
                acc[key] = acc.get(key, 0) + lam
            lst = [(k, v) for k, v in sorted(acc.items()) if v]
            if lst:
                tab.entries[(tau, (c.id,))] = lst
        out[c.id] = tab
    return out


# ---------------------------------------------------------------- models

def build_model(X: SimplicialSetData, W: int) -> QuasiFreeAlgebra:
    """L(X) truncated at weight W."""
    cells = X.ordered()
    gens = [(c.id, c.dim, 1) for c in cells]
    alg = QuasiFreeAlgebra(gens, {}, W)
    index = {c.id: i for i, c in enumerate(cells)}
    for c in cells:
        m = c.dim
        allowed = [J for J in D.subsets(m) if not isinstance(c.faces[J], Degenerate)]
        top = tuple(range(m + 1))
        mc = build_mc(m, W, targets=[top], allowed=allowed)
        remap = {mc.index[J]: index[c.faces[J]] for J in allowed}

        def sub(t):
            if isinstance(t, int):
                return remap.get(t)
            if t == ():
                return ()
            kids = [sub(ch) for ch in t]
            return None if any(k is None for k in kids) else tuple(kids)

        acc = {}
        for t, coef in mc.dgen[mc.index[top]].items():
            s = sub(t)
            if s is None:
                continue
            t2, sign = alg.canon(s)
            if sign:
                add_into(acc, {t2: Fraction(sign)}, coef)
        alg.set_dgen(index[c.id], acc)
    alg.cell_index = index
    return alg


def minimal_generators(g: QuasiFreeAlgebra) -> Dict[int, int]:
    """Homology of the generators under the linear part of d."""
    if not isinstance(g, QuasiFreeAlgebra):
        raise AlgebraError("minimal_generators needs a quasi-free algebra")
    C = GradedComplex()
    for i, (_, deg, _) in enumerate(g.gens):
        C.basis.setdefault(deg, []).append(i)
    for k, idx in C.basis.items():
        rows = {j: r for r, j in enumerate(C.basis.get(k - 1, []))}
        M = SparseMatrix(len(rows), len(idx))
        for col, i in enumerate(idx):
            for j, c in g.linear_part(i).items():
                M.add(rows[j], col, c)
        C.d[k] = M
    if not C.basis:
        return {}
    dims = homology_dims(C, range(min(C.basis), max(C.basis) + 1))
    return {k: v for k, v in dims.items() if v}


def homotopy_groups(X: SimplicialSetData, base: str, degrees: Iterable[int], W: int = 6,
                    stabilize: bool = False) -> dict:
    """alpha-homology of L(X) at the vertex MC element a_base.

    The report carries the truncation weight; with ``stabilize`` the run is
    repeated at W + 1 and ``stable`` records whether the two agree.
    """
    degrees = sorted(set(degrees))
    if any(k < 1 for k in degrees):
        raise AlgebraError("homotopy groups are reported in degrees >= 1")
    if base not in X.cells or X.cells[base].dim != 0:
        raise AlgebraError(f"{base!r} is not a vertex")
    L = build_model(X, W)
    alpha = {L.cell_index[base]: Fraction(1)}
    res = alpha_homology(L, alpha, degrees)
    report = {"dims": res["dims"], "W": W}
    if stabilize:
        L2 = build_model(X, W + 1)
        res2 = alpha_homology(L2, {L2.cell_index[base]: Fraction(1)}, degrees)
        report["stable"] = res2["dims"] == res["dims"]
        report["W_check"] = W + 1
    return report
