"""Command-line interface.

Every subcommand prints a short text payload; ``--json`` prints the full
report instead. Exit status: 0 success, 1 failed mathematical check, 2 bad
input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Dict, List, Mapping

from . import convolution as CV
from . import core as C
from . import dupont as D
from . import integration as I
from . import lie
from . import models as M
from . import transfer as TR
from . import trees as T
from .linalg import fmt


class InputError(Exception):
    pass


# ----------------------------------------------------------------- helpers

def _read(path: str) -> tuple:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as e:
        raise InputError(str(e)) from None
    try:
        return json.loads(text), hashlib.sha256(text.encode()).hexdigest()
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from None


def _space(spec: str, inputs: Dict[str, str]) -> M.SimplicialSetData:
    """Simplicial set from a file or a builtin name (point, empty, simplex:N, boundary:N, sphere:N)."""
    name, _, arg = spec.partition(":")
    try:
        if name == "point" and not arg:
            return M.point()
        if name == "empty" and not arg:
            return M.empty()
        if name in ("simplex", "boundary", "sphere") and arg:
            return getattr(M, name)(int(arg))
    except (ValueError, M.SimplicialSetError) as e:
        raise InputError(str(e)) from None
    doc, digest = _read(spec)
    inputs[spec] = digest
    try:
        return M.load_and_validate(doc)
    except M.SimplicialSetError as e:
        raise InputError(str(e)) from None


def _algebra(spec, inputs: Dict[str, str]) -> C.FiniteAlgebra:
    if isinstance(spec, str) and spec == "gC":
        return CV.g_complex()
    if isinstance(spec, str):
        doc, digest = _read(spec)
        inputs[spec] = digest
    else:
        doc = spec
    if doc == "gC":
        return CV.g_complex()
    try:
        return C.FiniteAlgebra.from_json(doc)
    except (C.AlgebraError, ValueError) as e:
        raise InputError(str(e)) from None


def _ring(spec: str, inputs: Dict[str, str]) -> CV.CommutativeAlgebra:
    name, _, arg = spec.partition(":")
    try:
        if name == "Q" and not arg:
            return CV.CommutativeAlgebra.rationals()
        if name == "quadratic" and arg:
            return CV.CommutativeAlgebra.quadratic(int(arg))
    except (ValueError, CV.CoalgebraError) as e:
        raise InputError(str(e)) from None
    doc, digest = _read(spec)
    inputs[spec] = digest
    try:
        return CV.CommutativeAlgebra.from_json(doc)
    except (CV.CoalgebraError, ValueError) as e:
        raise InputError(str(e)) from None


def _coalgebra(spec: str, inputs: Dict[str, str]) -> CV.CounitalCoalgebra:
    if spec == "circle":
        return CV.CounitalCoalgebra.circle_homology()
    if spec.startswith("points:"):
        try:
            return CV.CounitalCoalgebra.group_likes(int(spec.split(":")[1]))
        except ValueError as e:
            raise InputError(str(e)) from None
    doc, digest = _read(spec)
    inputs[spec] = digest
    try:
        return CV.CounitalCoalgebra.from_json(doc)
    except (CV.CoalgebraError, ValueError) as e:
        raise InputError(str(e)) from None


def _element(doc, labels=None) -> Dict[str, Fraction]:
    if not isinstance(doc, list):
        raise InputError("elements are lists of {label, coeff}")
    out: Dict[str, Fraction] = {}
    try:
        for e in doc:
            out[e["label"]] = out.get(e["label"], 0) + Fraction(e["coeff"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as ex:
        raise InputError(f"bad element entry: {ex}") from None
    if labels is not None:
        for k in out:
            if k not in labels:
                raise InputError(f"unknown label {k!r}")
    return {k: v for k, v in out.items() if v}


def _el_json(x: Mapping, name=str) -> list:
    return [{"label": name(k), "coeff": fmt(v)} for k, v in sorted(x.items(), key=lambda kv: str(name(kv[0])))]


def _subset(s: str) -> tuple:
    try:
        return tuple(sorted(int(a) for a in s.split(",")))
    except ValueError:
        raise InputError(f"bad subset {s!r}") from None


def _degrees(s: str) -> List[int]:
    try:
        if ".." in s:
            a, b = s.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in s.split(",")]
    except ValueError:
        raise InputError(f"bad degree range {s!r}") from None


def _dims(d: Mapping) -> dict:
    return {str(k): v for k, v in sorted(d.items())}


def _qf_json(alg: C.QuasiFreeAlgebra) -> dict:
    return {
        "W": alg.W,
        "generators": [{"label": a, "degree": b, "weight": c} for a, b, c in alg.gens],
        "differential": {
            alg.gens[i][0]: [{"tree": alg.label(t), "coeff": fmt(c)}
                             for t, c in sorted(alg.dgen.get(i, {}).items(),
                                                key=lambda kv: (alg.weight(kv[0]), C._dkey(kv[0])))]
            for i in range(len(alg.gens))
        },
    }


# --------------------------------------------------------------- commands

def cmd_trees(a, rep):
    if a.action == "enum":
        ts = T.enumerate_trees(a.arity, a.weight, not a.no_corks)
        rep["result"] = [T.to_text(t) for t in ts]
        return "[" + ", ".join(rep["result"]) + "]"
    t = _tree(a.tree)
    if a.action == "aut":
        rep["result"] = T.symmetry_coefficient(t)
        return str(rep["result"])
    if a.action == "split":
        rep["result"] = [{"tree": T.to_text(s), "multiplicity": m, "sign": g} for s, m, g in T.vertex_splittings(t)]
        return "\n".join(f"{r['tree']} x{r['multiplicity']} sign {r['sign']:+d}" for r in rep["result"])
    raise InputError(f"unknown trees action {a.action}")


def _tree(s):
    try:
        return T.parse(s)
    except T.TreeError as e:
        raise InputError(str(e)) from None


def cmd_dupont(a, rep):
    if a.action == "whitney":
        f = D.whitney(a.n, _subset(a.subset))
        rep["result"] = D.render(f)
        return rep["result"]
    if a.action == "verify":
        res = D.verify_contraction(a.n, a.degree)
        rep["result"] = {"checks": dict(res), "counterexamples": res.counterexamples}
        rep["status"] = "ok" if res.ok else "fail"
        return "\n".join(f"{k}: {'pass' if v else 'FAIL'}" for k, v in res.items())
    raise InputError(f"unknown dupont action {a.action}")


def cmd_transfer(a, rep):
    if a.action == "table":
        tab = TR.DecompositionTable.up_to_weight(a.n, a.max_vertices, a.max_arity)
        rep["result"] = tab.to_json()
        return json.dumps(rep["result"], sort_keys=True, indent=1)
    if a.action == "op":
        tau = _tree(a.tree)
        ins = [{_subset(s): Fraction(1)} for s in a.inputs] if a.inputs else []
        try:
            out = TR.transferred_operation(a.n, tau, ins)
        except (TR.TransferError, D.FormError) as e:
            raise InputError(str(e)) from None
        rep["result"] = [{"subset": list(k), "coeff": fmt(v)} for k, v in sorted(out.items())]
        return " + ".join(f"{fmt(v)} w{''.join(map(str, k))}" for k, v in sorted(out.items())) or "0"
    raise InputError(f"unknown transfer action {a.action}")


def cmd_mc(a, rep):
    alg = I.build_mc(a.n, a.weight)
    rep["params"].update(n=a.n, W=a.weight)
    rep["result"] = _qf_json(alg)
    lines = [f"d({g[0]}) = {alg.render(alg.dgen.get(i, {}))}" for i, g in enumerate(alg.gens)]
    return "\n".join(lines)


def _assignment(doc, g):
    try:
        n = int(doc["n"])
        vals = {_subset(k): _element(v, g.labels) for k, v in doc.get("values", {}).items()}
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad assignment document: {e}") from None
    return n, vals


def cmd_simplex(a, rep):
    doc, digest = _read(a.file)
    rep["inputs"][a.file] = digest
    g = _algebra(doc.get("algebra"), rep["inputs"])
    n, vals = _assignment(doc, g)
    try:
        ok, res = I.is_simplex(g, n, vals)
    except C.AlgebraError as e:
        raise InputError(str(e)) from None
    rep["result"] = {"simplex": ok, "residuals": {",".join(map(str, k)): _el_json(v) for k, v in res.items() if v}}
    rep["status"] = "ok" if ok else "fail"
    return "simplex" if ok else "not a simplex: " + ", ".join(rep["result"]["residuals"])


def cmd_horn(a, rep):
    doc, digest = _read(a.file)
    rep["inputs"][a.file] = digest
    g = _algebra(doc.get("algebra"), rep["inputs"])
    n, vals = _assignment(doc, g)
    try:
        k = int(doc["k"])
        top = _element(doc.get("top", []), g.labels)
        phi = I.horn_fill(g, n, k, vals, top)
    except I.HornError as e:
        rep["status"] = "fail"
        rep["result"] = {"error": str(e)}
        return str(e)
    except (KeyError, ValueError, C.AlgebraError) as e:
        raise InputError(str(e)) from None
    rep["result"] = {",".join(map(str, k2)): _el_json(v) for k2, v in sorted(phi.items(), key=lambda kv: (len(kv[0]), kv[0]))}
    F = tuple(i for i in range(n + 1) if i != k)
    return f"face {','.join(map(str, F))}: " + _render_lin(phi[F])


def _render_lin(x: Mapping) -> str:
    if not x:
        return "0"
    items = sorted(x.items(), key=lambda kv: (len(str(kv[0])), str(kv[0])))
    return " + ".join(f"{fmt(v)} {k}" for k, v in items).replace("+ -", "- ")


def cmd_bch(a, rep):
    res = I.bch(a.weight)
    order = {w: i for i, w in enumerate(lie.lyndon_words("xy", a.weight))}
    items = sorted(res.items(), key=lambda kv: order[kv[0]])
    rep["result"] = [{"lyndon": w, "bracket": _bracket_text(w), "coeff": fmt(c)} for w, c in items]
    return "\n".join(f"{fmt(c)} {_bracket_text(w)}" for w, c in items)


def _bracket_text(w: str) -> str:
    if len(w) == 1:
        return w
    u, v = lie.standard_factorization(w)
    return f"[{_bracket_text(u)},{_bracket_text(v)}]"


def cmd_model(a, rep):
    X = _space(a.space, rep["inputs"])
    if a.action == "build":
        L = M.build_model(X, a.weight)
        rep["params"]["W"] = a.weight
        rep["result"] = _qf_json(L)
        return "\n".join(f"d({g[0]}) = {L.render(L.dgen.get(i, {}))}" for i, g in enumerate(L.gens))
    if a.action == "minimal":
        L = M.build_model(X, 1)
        dims = M.minimal_generators(L)
        rep["result"] = {"minimal_generators": _dims(dims), "simplicial_homology": _dims(M.simplicial_homology(X))}
        return json.dumps(rep["result"], sort_keys=True)
    if a.action == "pi":
        try:
            res = M.homotopy_groups(X, a.base, _degrees(a.degrees), a.weight, stabilize=a.stabilize)
        except C.AlgebraError as e:
            raise InputError(str(e)) from None
        rep["params"]["W"] = a.weight
        res["dims"] = _dims(res["dims"])
        rep["result"] = res
        return json.dumps(res, sort_keys=True)
    raise InputError(f"unknown model action {a.action}")


def cmd_map(a, rep):
    H = _coalgebra(a.coalgebra, rep["inputs"])
    X = _space(a.target, rep["inputs"])
    L = M.build_model(X, a.weight)
    if a.base not in L.cell_index:
        raise InputError(f"unknown base vertex {a.base!r}")
    c0 = next((c for c in H.labels if H.counit.get(c)), None)
    if c0 is None:
        raise InputError("coalgebra has no counit")
    alpha = {(c0, L.cell_index[a.base]): Fraction(1) / H.counit[c0]}
    A = CV.convolution_algebra(H, L)
    ok, r = C.mc_verify(A, alpha)
    if not ok:
        rep["status"] = "fail"
        rep["result"] = {"error": "basepoint map is not Maurer-Cartan"}
        return rep["result"]["error"]
    res = CV.mapping_homotopy_groups(H, L, alpha, _degrees(a.degrees))
    rep["params"]["W"] = a.weight
    rep["result"] = {"dims": _dims(res["dims"]), "W": res["W"]}
    return json.dumps(rep["result"], sort_keys=True)


def cmd_extend(a, rep):
    g = _algebra(a.algebra, rep["inputs"])
    B = _ring(a.ring, rep["inputs"])
    A = CV.scalar_extension(g, B)
    syms, eqs = CV.mc_system(A)
    rep["result"] = {"unknowns": [str(s) for s in syms.values()],
                     "equations": [str(e) for _, e in sorted(eqs.items(), key=lambda kv: str(kv[0]))]}
    lines = [f"{e} = 0" for e in rep["result"]["equations"]]
    if a.candidate:
        try:
            cand = {}
            for part in a.candidate:
                key, _, val = part.partition("=")
                b, _, lab = key.partition("*")
                cand[(b, lab)] = Fraction(val)
        except ValueError as e:
            raise InputError(f"bad candidate: {e}") from None
        for k in cand:
            if k[0] not in B.basis or k[1] not in g.labels:
                raise InputError(f"unknown candidate coordinate {k}")
        ok, r = C.mc_verify(A, cand)
        rep["result"]["candidate_mc"] = ok
        rep["status"] = "ok" if ok else "fail"
        lines.append("candidate is Maurer-Cartan" if ok else "candidate is not Maurer-Cartan")
    return "\n".join(lines)


def cmd_check(a, rep):
    if a.what == "dupont":
        res = D.verify_contraction(a.n, a.degree)
        rep["result"] = {"checks": dict(res), "counterexamples": res.counterexamples}
        rep["status"] = "ok" if res.ok else "fail"
        return ("pass" if res.ok else "fail") + " " + json.dumps(rep["result"], sort_keys=True)
    if a.what == "mc":
        alg = I.build_mc(a.n, a.weight)
        bad = [g[0] for i, g in enumerate(alg.gens) if C.curvature_defect(alg, {i: 1})]
        rep["result"] = {"curvature_identity_failures": bad}
        rep["status"] = "ok" if not bad else "fail"
        return "pass" if not bad else "fail on " + ", ".join(bad)
    if a.what == "bch":
        ok = I.bch(a.weight) == lie.bch_oracle(a.weight)
        rep["result"] = {"matches_oracle": ok}
        rep["status"] = "ok" if ok else "fail"
        return "pass" if ok else "fail"
    if a.what == "structure":
        if not a.file:
            raise InputError("check structure needs --file")
        g = _algebra(a.file, rep["inputs"])
        res = C.check_structure(g, max_arity=a.arity)
        fail = res["failure"]
        if fail:
            fail = {"arity": fail["arity"], "inputs": list(fail["inputs"]), "witness": _el_json(fail["witness"])}
        rep["result"] = {"ok": res["ok"], "failure": fail}
        rep["status"] = "ok" if res["ok"] else "fail"
        return "pass" if res["ok"] else f"fail at arity {fail['arity']} on {fail['inputs']}"
    raise InputError(f"unknown check {a.what}")


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abslinf", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="print the full JSON report")
    p.add_argument("--seed", type=int, default=0, help="accepted for symmetry with the test tools; never affects results")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("trees")
    s.add_argument("action", choices=["enum", "aut", "split"])
    s.add_argument("tree", nargs="?")
    s.add_argument("--arity", type=int, default=2)
    s.add_argument("--weight", type=int, default=1)
    s.add_argument("--no-corks", action="store_true")
    s.set_defaults(func=cmd_trees)

    s = sub.add_parser("dupont")
    s.add_argument("action", choices=["whitney", "verify"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--subset", default="0")
    s.add_argument("--degree", type=int, default=4)
    s.set_defaults(func=cmd_dupont)

    s = sub.add_parser("transfer")
    s.add_argument("action", choices=["table", "op"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--tree", default="(||)")
    s.add_argument("--inputs", nargs="*", help="subsets such as 0 0,1")
    s.add_argument("--max-vertices", type=int, default=2)
    s.add_argument("--max-arity", type=int, default=3)
    s.set_defaults(func=cmd_transfer)

    s = sub.add_parser("mc")
    s.add_argument("action", choices=["build"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--weight", type=int, default=6)
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("simplex")
    s.add_argument("action", choices=["check"])
    s.add_argument("file")
    s.set_defaults(func=cmd_simplex)

    s = sub.add_parser("horn")
    s.add_argument("action", choices=["fill"])
    s.add_argument("file")
    s.set_defaults(func=cmd_horn)

    s = sub.add_parser("bch")
    s.add_argument("--weight", type=int, default=6)
    s.set_defaults(func=cmd_bch)

    s = sub.add_parser("model")
    s.add_argument("action", choices=["build", "pi", "minimal"])
    s.add_argument("space", help="JSON file or point, empty, simplex:N, boundary:N, sphere:N")
    s.add_argument("--weight", type=int, default=6)
    s.add_argument("--base", default="pt")
    s.add_argument("--degrees", default="1..3")
    s.add_argument("--stabilize", action="store_true")
    s.set_defaults(func=cmd_model)

    s = sub.add_parser("map")
    s.add_argument("action", choices=["pi"])
    s.add_argument("--coalgebra", default="circle", help="JSON file, circle or points:K")
    s.add_argument("--target", required=True)
    s.add_argument("--base", default="pt")
    s.add_argument("--degrees", default="1..2")
    s.add_argument("--weight", type=int, default=6)
    s.set_defaults(func=cmd_map)

    s = sub.add_parser("extend")
    s.add_argument("--algebra", default="gC", help="algebra JSON file or gC")
    s.add_argument("--ring", default="Q", help="JSON file, Q or quadratic:C for Q[x]/(x^2 - C)")
    s.add_argument("--candidate", nargs="*", help="coordinates such as x*y=1")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("check")
    s.add_argument("what", choices=["dupont", "mc", "bch", "structure"])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--degree", type=int, default=4)
    s.add_argument("--weight", type=int, default=4)
    s.add_argument("--file")
    s.add_argument("--arity", type=int, default=3)
    s.set_defaults(func=cmd_check)
    return p


def dispatch(argv: List[str]) -> tuple:
    """Run one command; returns (report, text, exit code)."""
    p = build_parser()
    a = p.parse_args(argv)
    rep = {"command": list(argv), "inputs": {}, "params": {}, "result": None, "status": "ok"}
    try:
        if getattr(a, "weight", 1) is not None and getattr(a, "weight", 1) < 0:
            raise InputError("--weight must be non-negative")
        text = a.func(a, rep)
    except InputError as e:
        rep["status"] = "input-error"
        rep["result"] = {"error": str(e)}
        return rep, f"error: {e}", 2
    except (T.TreeError, D.FormError, TR.TransferError, M.SimplicialSetError, CV.CoalgebraError) as e:
        rep["status"] = "input-error"
        rep["result"] = {"error": str(e)}
        return rep, f"error: {e}", 2
    code = 0 if rep["status"] == "ok" else 1
    return rep, text, code


def main(argv: List[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    rep, text, code = dispatch(argv)
    if "--json" in argv:
        print(json.dumps(rep, sort_keys=True, indent=1, default=str))
    else:
        print(text, file=sys.stderr if code == 2 else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
