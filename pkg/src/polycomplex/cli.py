"""Command-line interface.

Subcommands: catalog, analyze, power, twist, group, verify, export.
All output is JSON on stdout (or DOT for exports).  Exit codes: 0 pass,
1 verification failure, 2 usage or parse error, 3 cap exceeded.  There is
no randomness anywhere; identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog
from .complexes import (
    f_vector,
    from_json,
    isomorphism,
    to_dot,
    to_json,
    validate,
)
from .errors import CapExceeded, PolycomplexError, SearchBudgetExceeded
from .permgroup import automorphism_group, is_flag_transitive
from .power import (
    cyclic_group,
    power_complex,
    power_distinguished_subgroups,
    verify_power_aut,
    verify_skeleton_identity,
    wreath_group,
)
from .regular import verify_system_report
from .twisting import (
    generalized_power,
    twist_cyclic,
    universal_polytope,
    verify_coface_theorem,
    verify_subcomplex_theorem,
    verify_twist_skel,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _load_complex(ref: str):
    """A catalog name, or a path to a complex JSON file."""
    if ref in catalog.REGISTRY:
        return catalog.build(ref)
    try:
        with open(ref, "r", encoding="utf-8") as fh:
            return from_json(fh.read())
    except FileNotFoundError:
        raise PolycomplexError(
            f"{ref!r} is neither a catalog name ({', '.join(catalog.names())}) "
            f"nor a readable file")


def _emit(data, out_path=None):
    text = json.dumps(data, indent=2, sort_keys=False) \
        if not isinstance(data, str) else data
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        sys.stdout.write(text + "\n")


def _cmd_catalog(args) -> int:
    if args.action == "list":
        _emit({"names": catalog.names()})
        return EXIT_OK
    params = {}
    for kv in args.param or ():
        key, _, val = kv.partition("=")
        params[key] = int(val)
    cx = catalog.build(args.name, **params)
    _emit(to_json(cx, indent=2), args.out)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    cx = _load_complex(args.complex)
    report = validate(cx, flag_cap=args.flag_cap)
    out = {
        "rank": cx.rank,
        "f": list(f_vector(cx)),
        "c": list(report.c_vector) if report.c_vector is not None else None,
        "flags": cx.flag_count() if report.passed_i1 and report.passed_i2 else None,
        "vertexDescribable": report.vertex_describable,
        "axioms": {
            "I1": report.passed_i1,
            "I2": report.passed_i2,
            "I3": report.passed_i3,
            "I4": report.passed_i4,
        },
        "diagnostics": report.diagnostics,
    }
    try:
        aut = automorphism_group(
            cx, on="vertices" if report.vertex_describable else "faces",
            node_cap=args.node_cap, order_cap=args.group_cap)
        out["autOrder"] = aut.order
        out["regular"] = is_flag_transitive(aut, cx)
    except (CapExceeded, SearchBudgetExceeded):
        out["autOrder"] = f"unknown(cap)"
        out["regular"] = f"unknown(cap)"
    _emit(out, args.out)
    return EXIT_OK


def _cmd_power(args) -> int:
    base = _load_complex(args.base)
    if args.action == "build":
        cx = power_complex(args.n, base, vertex_cap=args.vertex_cap)
        _emit(to_json(cx, indent=2), args.out)
        return EXIT_OK
    if args.action == "verify-aut":
        rep = verify_power_aut(args.n, base)
        rep_out = {k: v for k, v in rep.items()}
        _emit(rep_out, args.out)
        return EXIT_OK if rep["ok"] else EXIT_FAIL
    if args.action == "verify-skel":
        ok = verify_skeleton_identity(args.n, base, args.j)
        _emit({"n": args.n, "j": args.j, "skeletonIdentity": ok}, args.out)
        return EXIT_OK if ok else EXIT_FAIL
    raise PolycomplexError(f"unknown power action {args.action!r}")


def _parse_schlafli(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def _cmd_twist(args) -> int:
    base = _load_complex(args.base)
    if args.action == "cyclic":
        group, cx = twist_cyclic(args.n, base)
        _emit({"groupOrder": group.order, "f": list(f_vector(cx)),
               "isomorphicToPower": True}, args.out)
        return EXIT_OK
    schlafli = _parse_schlafli(args.schlafli or "")
    if args.action == "diagram":
        from .twisting import build_diagram_d

        _emit(build_diagram_d(schlafli, base).to_dot(), args.out)
        return EXIT_OK
    if args.action == "lk":
        group, cx = generalized_power(schlafli, base, cap=args.cap)
        _emit({"groupOrder": group.order, "f": list(f_vector(cx))}, args.out)
        return EXIT_OK
    if args.action == "verify-skel":
        ok = verify_twist_skel(schlafli, base, args.j, cap=args.cap)
        _emit({"schlafli": list(schlafli), "j": args.j, "skeleton": ok}, args.out)
        return EXIT_OK if ok else EXIT_FAIL
    if args.action == "verify-faces":
        ok = verify_subcomplex_theorem(schlafli, base, args.i, cap=args.cap)
        _emit({"schlafli": list(schlafli), "i": args.i, "faces": ok}, args.out)
        return EXIT_OK if ok else EXIT_FAIL
    raise PolycomplexError(f"unknown twist action {args.action!r}")


def _cmd_group(args) -> int:
    cx = _load_complex(args.complex)
    aut = automorphism_group(cx, on=args.on)
    _emit(aut.to_json_dict(), args.out)
    return EXIT_OK


def _cmd_export(args) -> int:
    cx = _load_complex(args.complex)
    _emit(to_dot(cx), args.out)
    return EXIT_OK


# -- verification suites -------------------------------------------------------


def _suite_thm_4_1():
    checks = []
    for n, name in ((2, "edge2"), (3, "edge2"), (2, "simplex2"), (2, "square")):
        rep = verify_power_aut(n, catalog.build(name))
        checks.append({
            "instance": f"{n}^{name}", "ok": rep["ok"],
            "autOrder": rep["autOrder"], "expected": rep["expectedOrder"],
        })
    return checks


def _suite_thm_4_2():
    checks = []
    for n, name in ((3, "edge2"), (2, "simplex2")):
        rep = power_distinguished_subgroups(n, catalog.build(name))
        checks.append({
            "instance": f"{n}^{name}", "ok": rep["ok"],
            "cHat": list(rep["cHat"]), "expectedCHat": list(rep["expectedCHat"]),
            "r0Computed": rep["r0Computed"],
            "r0DerivationFormula": rep["r0DerivationFormula"],
            "r0BoxedFormula": rep["r0BoxedFormula"],
            "boxedFormulaDiscrepancy": rep["boxedFormulaDiscrepancy"],
        })
    return checks


def _suite_lemma_transsub():
    checks = []
    for n, name in ((2, "simplex2"), (3, "edge2"), (2, "fano")):
        base = catalog.build(name)
        lam = automorphism_group(base, on="vertices")
        grp = wreath_group(cyclic_group(n), base, lam)
        grp.enumerate()
        ft = is_flag_transitive(grp, power_complex(n, base))
        checks.append({
            "instance": f"C{n} wr Aut({name})", "ok": bool(ft),
            "order": grp.order,
        })
    return checks


def _suite_skel_identity():
    checks = []
    for n, name, j in ((2, "simplex2", 0), (2, "fano", 0), (3, "edge2", 0)):
        ok = verify_skeleton_identity(n, catalog.build(name), j)
        checks.append({"instance": f"({n}, {name}, j={j})", "ok": bool(ok)})
    return checks


def _suite_twist_recover():
    checks = []
    for n, name in ((2, "simplex2"), (3, "edge2"), (2, "fano")):
        group, cx = twist_cyclic(n, catalog.build(name))
        checks.append({
            "instance": f"({n}, {name})", "ok": True,
            "groupOrder": group.order, "f": list(f_vector(cx)),
        })
    return checks


def _suite_thm_twistthm():
    checks = []
    for schlafli, name, worder in (((3,), "simplex2", 192), ((3,), "edge3", 192)):
        base = catalog.build(name)
        lam = automorphism_group(base, on="vertices")
        group, cx = generalized_power(schlafli, base)
        ok = group.order == worder * lam.order
        checks.append({
            "instance": f"{{{','.join(map(str, schlafli))}}}^{name}",
            "ok": bool(ok), "groupOrder": group.order,
            "expected": worder * lam.order,
        })
    return checks


def _suite_thm_subcomplex():
    checks = []
    ok = verify_subcomplex_theorem((3,), catalog.build("simplex2"), 1)
    checks.append({"instance": "{3}^simplex2 faces i=1", "ok": bool(ok)})
    ok = verify_coface_theorem((3,), catalog.build("simplex2"), 0)
    checks.append({"instance": "{3}^simplex2 co-face i=0", "ok": bool(ok)})
    ok = verify_coface_theorem((3,), catalog.build("edge3"), 0)
    checks.append({"instance": "{3}^edge3 co-face i=0", "ok": bool(ok)})
    return checks


def _suite_thm_twistskel():
    checks = []
    for schlafli, name, j in (((3,), "simplex2", 0), ((3,), "simplex2", 1),
                              ((3,), "edge2", 0)):
        ok = verify_twist_skel(schlafli, catalog.build(name), j)
        checks.append({
            "instance": f"{{{','.join(map(str, schlafli))}}}^{name} j={j}",
            "ok": bool(ok)})
    return checks


def _suite_eq_simsim():
    base = catalog.build("simplex2")
    group, cx = generalized_power((3,), base)
    cell24 = universal_polytope((3, 4, 3))
    iso = isomorphism(cx, cell24)
    ok = (group.order == 1152 and f_vector(cx) == (24, 96, 96, 24)
          and iso is not None)
    return [{
        "instance": "{3}^simplex2 vs universal (3,4,3)", "ok": bool(ok),
        "groupOrder": group.order, "f": list(f_vector(cx)),
        "isomorphic": iso is not None,
    }]


def _suite_negative_control():
    """Deliberately corrupted systems; this suite is expected to FAIL."""
    from .permgroup import PermutationGroup, Permutation, closure
    from .regular import GroupComplexSpec, check_commutation, check_intersection_property

    checks = []
    # S_4 with non-commuting order-2 subgroups two ranks apart
    s4 = closure([Permutation([1, 0, 2, 3]), Permutation([0, 2, 1, 3]),
                  Permutation([0, 1, 3, 2])])
    triv = PermutationGroup.from_element_matrix(
        np.arange(4, dtype=np.int32).reshape(1, -1))
    r0 = closure([Permutation([1, 0, 2, 3])], degree=4)
    r1 = closure([Permutation([0, 2, 1, 3])], degree=4)
    r2 = closure([Permutation([0, 2, 1, 3])], degree=4)
    spec = GroupComplexSpec(s4, [triv, r0, r2, r1, triv])
    comm_ok, wit = check_commutation(spec)
    checks.append({"instance": "S4 corrupted commutation",
                   "ok": bool(comm_ok), "witnesses": [list(w) for w in wit]})
    # C2 x C2 with R_0 = R_1 = whole group
    g = closure([Permutation([1, 0, 2, 3]), Permutation([0, 1, 3, 2])])
    triv4 = PermutationGroup.from_element_matrix(
        np.arange(4, dtype=np.int32).reshape(1, -1))
    spec2 = GroupComplexSpec(g, [triv4, g, g, triv4])
    int_ok, wit2 = check_intersection_property(spec2)
    checks.append({"instance": "C2xC2 intersection", "ok": bool(int_ok),
                   "witnesses": [[list(i), list(j)] for i, j, _ in wit2]})
    return checks


SUITES = {
    "thm-4.1": _suite_thm_4_1,
    "thm-4.2": _suite_thm_4_2,
    "lemma-transsub": _suite_lemma_transsub,
    "skel-identity": _suite_skel_identity,
    "twist-recover": _suite_twist_recover,
    "thm-twistthm": _suite_thm_twistthm,
    "thm-subcomplex": _suite_thm_subcomplex,
    "thm-twistskel": _suite_thm_twistskel,
    "eq-simsim": _suite_eq_simsim,
    "negative-control": _suite_negative_control,
}


def _cmd_verify(args) -> int:
    if args.suite == "system":
        cx = _load_complex(args.complex)
        rep = verify_system_report(cx)
        _emit(rep, args.out)
        ok = (rep["commutation"] and rep["intersection"]
              and rep["reconstructionIsomorphic"])
        return EXIT_OK if ok else EXIT_FAIL
    names = sorted(k for k in SUITES if k != "negative-control") \
        if args.suite == "all" else [args.suite]
    report = {}
    all_ok = True
    for name in names:
        fn = SUITES.get(name)
        if fn is None:
            raise PolycomplexError(
                f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}, system")
        checks = fn()
        report[name] = checks
        all_ok &= all(c["ok"] for c in checks)
    _emit(report, args.out)
    return EXIT_OK if all_ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polycomplex",
        description="Build, analyze and verify ranked incidence complexes, "
                    "power complexes and their twisted generalizations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list or build the named instances")
    p.add_argument("action", choices=["list", "build"])
    p.add_argument("name", nargs="?", help="catalog entry name")
    p.add_argument("--param", action="append", help="override k=v (repeatable)")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_catalog)

    p = sub.add_parser("analyze", help="axioms, f- and c-vector, group size")
    p.add_argument("complex", help="catalog name or JSON file")
    p.add_argument("--flag-cap", type=int, default=None)
    p.add_argument("--node-cap", type=int, default=None)
    p.add_argument("--group-cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("power", help="power complexes and their checks")
    p.add_argument("action", nargs="?", default="build",
                   choices=["build", "verify-aut", "verify-skel"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--vertex-cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_power)

    p = sub.add_parser("twist", help="twisting constructions")
    p.add_argument("action", choices=["cyclic", "lk", "verify-skel",
                                      "verify-faces", "diagram"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--base", required=True)
    p.add_argument("--schlafli", help="space or comma separated labels")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_twist)

    p = sub.add_parser("group", help="automorphism group of a complex")
    p.add_argument("action", choices=["aut"])
    p.add_argument("--complex", required=True)
    p.add_argument("--on", choices=["faces", "vertices"], default="faces")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_group)

    p = sub.add_parser("verify", help="run a named theorem suite")
    p.add_argument("suite", help=f"one of: all, system, {', '.join(sorted(SUITES))}")
    p.add_argument("--complex", help="for the 'system' suite")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("export", help="DOT of the Hasse diagram")
    p.add_argument("format", choices=["dot"])
    p.add_argument("--complex", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_export)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except CapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except SearchBudgetExceeded as exc:
        sys.stderr.write(f"search budget exceeded: {exc}\n")
        return EXIT_CAP
    except PolycomplexError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
