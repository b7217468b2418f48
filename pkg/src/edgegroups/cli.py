"""Command-line driver: parse inputs, run the pipelines under budgets,
emit machine-readable verification reports.

Commands: ``tower`` (build and verify the chain for a graph), ``fcover``
(build and verify a finite F-inverse cover for a small group),
``check-monoid`` (validate an inverse monoid table), ``diagnose-ce``
(structural diagnostics of the coset extensions over a graph's covers).

Exit codes: 0 verified, 2 truncated but consistent, 1 check failed or
invalid input (the report carries a witness).  Usage errors exit 64.
Reports are JSON with a versioned schema; a human summary goes to
standard output unless ``--format json`` is selected.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time

from .sgraph import build_graph, sorted_ids
from .egroup import (
    BudgetExceeded,
    cayley_graph,
    find_canonical_morphism,
    group_order,
    make_graph_action,
    transition_group,
)
from .cosetext import ce_diagnostics, coset_extension_full, is_admissible
from .tower import (
    Budgets,
    ConstructionBug,
    build_chain,
    enumerate_covers,
    input_subgraph,
    main_lemma_report,
    symmetry_report,
    tower_report,
)
from .invmon import (
    MonoidError,
    build_h,
    cayley_graph_of_group,
    f_inverse_cover,
    is_f_inverse,
    margolis_meakin,
    psi_map,
    sigma_classes,
    validate,
    verify_premorphism,
)
SCHEMA = "edgegroups.report.v1"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_TRUNCATED = 2
EXIT_USAGE = 64


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def to_json(self):
        return {"message": str(self), "line": self.line, "column": self.column}


# ---------------------------------------------------------------------------
# input formats


def parse_graph_file(text) -> "LabelledGraph":
    """Versioned text format: one ``v <id>`` line per vertex and one
    ``e <id> <src> <dst>`` line per positive edge."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "# edgegroups graph v1":
        raise ParseError("missing graph header '# edgegroups graph v1'", line=1)
    vertices = []
    edges = []
    for no, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] == "v":
            if len(parts) != 2:
                raise ParseError("vertex line needs one id", line=no)
            vertices.append(parts[1])
        elif parts[0] == "e":
            if len(parts) != 4:
                raise ParseError("edge line needs id, src, dst", line=no)
            edges.append((parts[1], parts[2], parts[3]))
        else:
            raise ParseError("unknown record %r" % parts[0], line=no, column=1)
    try:
        return build_graph(vertices, edges)
    except Exception as exc:
        raise ParseError(str(exc))


def format_graph(g) -> str:
    out = ["# edgegroups graph v1"]
    for v in sorted_ids(g.vertices):
        out.append("v %s" % (v,))
    for e in sorted_ids(g.positive_darts()):
        out.append("e %s %s %s" % (g.label[e][0], g.alpha[e], g.omega(e)))
    return "\n".join(out) + "\n"


def parse_monoid_file(text):
    """Versioned table format: size, multiplication rows, inverse vector,
    identity index, optional generator lines."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "# edgegroups monoid v1":
        raise ParseError("missing monoid header '# edgegroups monoid v1'", line=1)
    n = None
    rows = []
    inv = None
    one = None
    gens = {}
    for no, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        kind = parts[0]
        try:
            if kind == "n":
                n = int(parts[1])
            elif kind == "row":
                rows.append([int(x) for x in parts[1:]])
            elif kind == "inv":
                inv = [int(x) for x in parts[1:]]
            elif kind == "one":
                one = int(parts[1])
            elif kind == "gen":
                gens[parts[1]] = int(parts[2])
            else:
                raise ParseError("unknown record %r" % kind, line=no, column=1)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError("malformed %r line: %s" % (kind, exc), line=no)
    if n is None or inv is None or one is None:
        raise ParseError("monoid file needs n, rows, inv and one")
    if len(rows) != n:
        raise ParseError("expected %d rows, found %d" % (n, len(rows)))
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError("row %d has %d entries, expected %d" % (i, len(row), n))
    return rows, inv, one, gens


BUILTIN_GROUPS = {
    "trivial": ((0,),),
    "c2": ((1, 0),),
    "c3": ((1, 2, 0),),
    "klein": ((1, 0, 3, 2), (2, 3, 0, 1)),
}


def group_from_spec(spec):
    """A small group over letters a, b, ... from a builtin name or a
    monoid table file with generator lines."""
    if spec in BUILTIN_GROUPS:
        perms = BUILTIN_GROUPS[spec]
        letters = [chr(ord("a") + i) for i in range(len(perms))]
        gens = dict(zip(letters, perms))
        return transition_group(
            make_graph_action(tuple(range(len(perms[0]))), gens, frozenset(letters))
        )
    with open(spec) as fh:
        rows, inv, one, gens = parse_monoid_file(fh.read())
    m = validate(rows, inv, one)
    from .invmon import is_group

    if not is_group(m):
        raise ParseError("table is not a group")
    if not gens:
        raise ParseError("group table needs gen lines for the assignment")
    if one != 0:
        raise ParseError("group table must list the identity first")
    perm_gens = {}
    for a, gi in gens.items():
        perm_gens[a] = tuple(m.mul(i, gi) for i in range(m.size))
    return transition_group(
        make_graph_action(tuple(range(m.size)), perm_gens, frozenset(perm_gens))
    )


# ---------------------------------------------------------------------------
# commands


def _budgets(args):
    return Budgets(elements=args.budget_elements, vertices=args.budget_vertices)


def cmd_tower(args):
    with open(args.input) as fh:
        g0 = parse_graph_file(fh.read())
    t0 = time.monotonic()
    tower = build_chain(
        g0,
        max_level=args.max_level,
        budgets=_budgets(args),
        cycle_len=args.cycle_len,
        lean=args.lean,
    )
    result = {"tower": tower_report(tower)}
    if tower.status != "check_failed":
        result["main_lemma"] = main_lemma_report(
            tower, samples=args.samples, seed=args.seed
        )
        result["symmetry"] = symmetry_report(
            tower, samples=args.samples, seed=args.seed
        )
    status = tower.status
    if status == "verified" and not (
        result["main_lemma"]["passed"] and result["symmetry"]["passed"]
    ):
        status = "check_failed"
    result["status"] = status
    result["timings"] = {"total": round(time.monotonic() - t0, 6)}
    return result, _exit_code(status)


def cmd_fcover(args):
    Q = group_from_spec(args.q)
    budgets = _budgets(args)
    t0 = time.monotonic()
    monoid, ctx = margolis_meakin(Q, budgets.elements)
    qgraph, _ = cayley_graph_of_group(Q, budgets.elements)
    tower = build_chain(qgraph, budgets=budgets, cycle_len=args.cycle_len)
    result = {
        "q_order": group_order(Q, budgets.elements),
        "expansion_size": monoid.size,
        "tower": tower_report(tower),
    }
    if tower.status != "verified":
        result["status"] = tower.status
        result["timings"] = {"total": round(time.monotonic() - t0, 6)}
        return result, _exit_code(tower.status)
    certification = main_lemma_report(tower, samples=args.samples, seed=args.seed)
    result["reflection_certificate"] = certification
    sd = build_h(tower.group, ctx, budgets.elements)
    psi = psi_map(sd, budgets.elements)
    result["h_order"] = group_order(sd.H, budgets.elements)
    result["premorphism"] = verify_premorphism(sd, monoid, psi, budgets.elements)
    cover = f_inverse_cover(sd, monoid, psi, budgets.elements)
    result["cover"] = cover.report
    ok = (
        certification["passed"]
        and result["premorphism"]["passed"]
        and cover.report["passed"]
    )
    result["status"] = "verified" if ok else "check_failed"
    result["timings"] = {"total": round(time.monotonic() - t0, 6)}
    return result, _exit_code(result["status"])


def cmd_check_monoid(args):
    with open(args.input) as fh:
        rows, inv, one, gens = parse_monoid_file(fh.read())
    try:
        m = validate(rows, inv, one)
    except MonoidError as exc:
        result = {
            "status": "check_failed",
            "inverse_monoid": False,
            "witness": list(exc.witness) if exc.witness else None,
            "message": str(exc),
        }
        return result, EXIT_FAILED
    ok, info = is_f_inverse(m)
    result = {
        "status": "verified",
        "inverse_monoid": True,
        "size": m.size,
        "sigma_classes": len(sigma_classes(m)),
        "f_inverse": ok,
    }
    if ok:
        result["class_maxima"] = {str(k): v for k, v in info.items()}
    else:
        result["maximal_witness"] = info["maximal"]
    return result, EXIT_OK


def cmd_diagnose_ce(args):
    with open(args.input) as fh:
        g0 = parse_graph_file(fh.read())
    budgets = _budgets(args)
    tower = build_chain(
        g0, max_level=args.max_level, budgets=budgets, cycle_len=args.cycle_len
    )
    if tower.status == "truncated":
        return {"status": "truncated", "tower": tower_report(tower)}, EXIT_TRUNCATED
    G = tower.group
    level = tower.levels[-1].k
    cay = cayley_graph(G, budget=budgets.elements)
    diagnostics = []
    all_ok = True
    for size in range(1, level + 1):
        for A in itertools.combinations(sorted_ids(G.alphabet), size):
            A = frozenset(A)
            for ci, comp in enumerate(input_subgraph(g0, A).components()):
                covers, _ = enumerate_covers(
                    G, cay, tower.x1, comp, budgets.elements, bases="least"
                )
                for vi, cover in enumerate(covers):
                    ok, _ = is_admissible(G, A, cover, budgets.elements)
                    entry = {
                        "letters": [str(a) for a in sorted_ids(A)],
                        "component": ci,
                        "cover": vi,
                        "admissible": ok,
                    }
                    if ok:
                        ce = coset_extension_full(
                            G,
                            A,
                            cover,
                            budget=budgets.elements,
                            check_admissible=False,
                            verify=False,
                        )
                        entry["diagnostics"] = ce_diagnostics(ce, budgets.elements)
                        all_ok = all_ok and entry["diagnostics"]["cluster_property"]
                        all_ok = all_ok and entry["diagnostics"]["bridge_free"]
                    else:
                        all_ok = False
                    diagnostics.append(entry)
    status = "verified" if all_ok else "check_failed"
    return {"status": status, "level": level, "extensions": diagnostics}, _exit_code(
        status
    )


def _exit_code(status):
    return {"verified": EXIT_OK, "truncated": EXIT_TRUNCATED}.get(status, EXIT_FAILED)


# ---------------------------------------------------------------------------
# report plumbing


def _summary(command, result):
    lines = ["%s: %s" % (command, result.get("status", "?"))]
    if command == "tower":
        tw = result.get("tower", {})
        lines.append(
            "  levels: %s, certified grade %s"
            % (len(tw.get("levels", [])), tw.get("certified_grade"))
        )
        for lv in tw.get("levels", []):
            lines.append(
                "  level %d: |X| = %d, |G| = %s"
                % (lv["k"], lv["x_vertices"], lv.get("group_order"))
            )
        if "main_lemma" in result:
            lines.append(
                "  main lemma suite: %s"
                % ("pass" if result["main_lemma"]["passed"] else "FAIL")
            )
        if "symmetry" in result:
            lines.append(
                "  symmetry suite: %s"
                % ("pass" if result["symmetry"]["passed"] else "FAIL")
            )
    elif command == "fcover":
        lines.append(
            "  |Q| = %s, |M(Q)| = %s, |H| = %s"
            % (
                result.get("q_order"),
                result.get("expansion_size"),
                result.get("h_order"),
            )
        )
        if "cover" in result:
            lines.append(
                "  cover: T = S %s, F-inverse %s, idempotent-separating %s"
                % (
                    result["cover"]["t_equals_s"],
                    result["cover"]["f_inverse"],
                    result["cover"]["idempotent_separating"],
                )
            )
    elif command == "check-monoid":
        lines.append(
            "  inverse monoid: %s; F-inverse: %s"
            % (
                "yes" if result.get("inverse_monoid") else "no",
                result.get("f_inverse", "n/a"),
            )
        )
    elif command == "diagnose-ce":
        n = len(result.get("extensions", []))
        lines.append("  coset extensions checked: %d" % n)
    return "\n".join(lines)


def emit(command, args, result, code):
    report = {
        "schema": SCHEMA,
        "command": command,
        "config": {
            "max_level": getattr(args, "max_level", None),
            "budget_elements": args.budget_elements,
            "budget_vertices": args.budget_vertices,
            "cycle_len": getattr(args, "cycle_len", None),
            "samples": getattr(args, "samples", None),
            "seed": getattr(args, "seed", None),
            "lean": getattr(args, "lean", False),
        },
        "result": result,
        "status": result.get("status"),
    }
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.format == "json":
        print(text)
    else:
        print(_summary(command, result))
        if args.out:
            print("report written to %s" % args.out)
    return code


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        sys.exit(EXIT_USAGE)


def _add_common(sub, with_input=True):
    default_budget = int(os.environ.get("EDGEGROUPS_BUDGET", 200_000))
    if with_input:
        sub.add_argument("input", help="input file")
    sub.add_argument("--max-level", type=int, default=None)
    sub.add_argument("--budget-elements", type=int, default=default_budget)
    sub.add_argument("--budget-vertices", type=int, default=default_budget)
    sub.add_argument("--cycle-len", type=int, default=2)
    sub.add_argument("--samples", type=int, default=500)
    sub.add_argument("--seed", type=int, default=2024)
    sub.add_argument("--lean", action="store_true")
    sub.add_argument("--out", default=None)
    sub.add_argument("--format", choices=["json", "text"], default="text")


def main(argv=None):
    parser = _Parser(prog="edgegroups")
    subs = parser.add_subparsers(dest="command", required=True)
    _add_common(subs.add_parser("tower", help="build and verify the chain"))
    fc = subs.add_parser("fcover", help="build and verify an F-inverse cover")
    fc.add_argument("--q", required=True, help="builtin name or group table file")
    _add_common(fc, with_input=False)
    _add_common(subs.add_parser("check-monoid", help="validate an inverse monoid table"))
    _add_common(subs.add_parser("diagnose-ce", help="coset extension diagnostics"))
    args = parser.parse_args(argv)

    handlers = {
        "tower": cmd_tower,
        "fcover": cmd_fcover,
        "check-monoid": cmd_check_monoid,
        "diagnose-ce": cmd_diagnose_ce,
    }
    try:
        result, code = handlers[args.command](args)
    except ParseError as exc:
        result = {"status": "check_failed", "parse_error": exc.to_json()}
        code = EXIT_FAILED
    except FileNotFoundError as exc:
        result = {"status": "check_failed", "error": str(exc)}
        code = EXIT_FAILED
    except (BudgetExceeded,) as exc:
        result = {
            "status": "truncated",
            "error": {"what": exc.what, "count": exc.count},
        }
        code = EXIT_TRUNCATED
    except (ConstructionBug, MonoidError) as exc:
        result = {
            "status": "check_failed",
            "error": str(exc),
            "witness": str(getattr(exc, "witness", None)),
        }
        code = EXIT_FAILED
    return emit(args.command, args, result, code)


if __name__ == "__main__":
    sys.exit(main())
