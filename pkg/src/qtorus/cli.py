"""Command-line front end: ``qtorus analyze | examples | verify``."""

from __future__ import annotations

import argparse
import json
import sys
from math import factorial
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import autdecide, builders
from .autdecide import (
    HYPOTHESES_VIOLATED,
    INCONCLUSIVE,
    NON_RIGID,
    RIGID,
    RigidityReport,
    dim_one_rigidity,
    e_module_is_zero,
    theorem1_decide,
    theorem2_decide,
)
from .bicharacter import radical_basis
from .exterior import DEFAULT_PERM_CAP, CapExceeded, format_perm, permutation_symmetries
from .qmatrix import (
    QMatrix,
    SpecError,
    lambda_structure,
    parse_spec,
    serialize,
    to_spec,
    torsion_free_reduction,
)
from .skewalg import AutomorphismSpec, check_automorphism_pair

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3

CONFLICT = "conflict"


class ParseFailure(Exception):
    pass


@dataclass
class AnalysisReport:
    input: dict
    lambda_invariants: dict
    torsion_reduction: Optional[dict]
    identity_entries: list
    all_identity_rows: list
    permutation_symmetries: list
    radical_basis: list
    e_module: dict
    theorem1: Optional[dict]
    theorem2: Optional[dict]
    dim_one: dict
    witness_verification: list
    verdict: str = INCONCLUSIVE
    route: str = ""
    routes: list = field(default_factory=list)
    summary: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "input": self.input,
            "lambda": self.lambda_invariants,
            "torsion_reduction": self.torsion_reduction,
            "identity_entries": self.identity_entries,
            "all_identity_rows": self.all_identity_rows,
            "permutation_symmetries": self.permutation_symmetries,
            "radical_basis": self.radical_basis,
            "e_module": self.e_module,
            "theorem1": self.theorem1,
            "theorem2": self.theorem2,
            "dim_one": self.dim_one,
            "witness_verification": self.witness_verification,
            "verdict": self.verdict,
            "route": self.route,
            "routes": self.routes,
            "summary": self.summary,
        }


def _aggregate(reports: dict[str, Optional[RigidityReport]]) -> tuple[str, str, list[str]]:
    """Pick the overall verdict; every route is kept in the report regardless."""
    notes = []
    t1, t2, d1 = reports.get("theorem1"), reports.get("theorem2"), reports["dim_one"]
    witnesses = [(name, w) for name, rep in reports.items() if rep is not None
                 for w in rep.witnesses if w.verified is not False and not w.forward.is_toric()]
    rigid_routes = [rep.route for rep in reports.values() if rep is not None and rep.verdict == RIGID]
    if rigid_routes and witnesses:
        notes.append("routes disagree: " + ", ".join(rigid_routes) + " claim rigid but a witness exists")
        return CONFLICT, "; ".join(rigid_routes), notes

    if d1.verdict == RIGID and d1.route == "dimension-one (certified)":
        return RIGID, d1.route, notes
    if t2 is not None and t2.verdict == RIGID:
        return RIGID, t2.route, notes
    if t1 is not None and t1.conclusive:
        return t1.verdict, t1.route, notes
    if witnesses:
        name, w = witnesses[0]
        return NON_RIGID, reports[name].route, notes
    if d1.verdict == RIGID:
        notes.append("rigidity rests on a bounded search, not a certificate")
        return RIGID, d1.route, notes
    return INCONCLUSIVE, "", notes


def analyze(q: QMatrix, bound: int = 3, perm_cap: int = DEFAULT_PERM_CAP,
            skip_oracle: bool = False) -> AnalysisReport:
    """Run every decision route on q and combine them.  Raises CapExceeded."""
    verify = not skip_oracle
    st = lambda_structure(q)
    lam = {"rank": st.rank, "torsion": list(st.torsion), "torsion_free": st.torsion_free}

    reduction = None
    if not st.torsion_free:
        reduced, p = torsion_free_reduction(q)
        rs = lambda_structure(reduced)
        reduction = {"p": p, "reduced": to_spec(reduced),
                     "reduced_lambda": {"rank": rs.rank, "torsion_free": rs.torsion_free},
                     "note": "informational; verdicts below concern the original matrix"}

    e_zero, e_wit = e_module_is_zero(q)
    e_info = {"is_zero": e_zero,
              "witness": None if e_wit is None else {"i": e_wit[0] + 1, "nu": list(e_wit[1])}}
    syms = permutation_symmetries(q, perm_cap)

    reports: dict[str, Optional[RigidityReport]] = {"theorem1": None, "theorem2": None}
    if q.n >= 3:
        reports["theorem1"] = theorem1_decide(q, perm_cap, verify=verify)
        reports["theorem2"] = theorem2_decide(q, perm_cap)
    reports["dim_one"] = dim_one_rigidity(q, bound, perm_cap, verify=verify)

    checks = []
    for name, rep in reports.items():
        for w in rep.witnesses if rep is not None else ():
            checks.append({"route": rep.route, "witness": w.forward.describe(),
                           "verified": w.verified, "toric": w.forward.is_toric()})

    verdict, route, notes = _aggregate(reports)
    rep = AnalysisReport(
        input=to_spec(q),
        lambda_invariants=lam,
        torsion_reduction=reduction,
        identity_entries=[f"{i + 1},{j + 1}" for i, j in q.identity_entries()],
        all_identity_rows=[k + 1 for k in autdecide.all_identity_rows(q)],
        permutation_symmetries=[format_perm(s) for s in syms],
        radical_basis=radical_basis(q),
        e_module=e_info,
        theorem1=None if reports["theorem1"] is None else reports["theorem1"].to_json(),
        theorem2=None if reports["theorem2"] is None else reports["theorem2"].to_json(),
        dim_one=reports["dim_one"].to_json(),
        witness_verification=checks,
        verdict=verdict,
        route=route,
        routes=[{"name": k, "verdict": v.verdict, "route": v.route} for k, v in reports.items() if v is not None],
    )
    rep.summary = _summary(q, rep, reports) + notes
    return rep


def _summary(q: QMatrix, rep: AnalysisReport, reports) -> list[str]:
    out = [f"n = {q.n}; lambda-group rank {rep.lambda_invariants['rank']}, "
           + ("torsion-free" if rep.lambda_invariants["torsion_free"] else
              f"torsion {rep.lambda_invariants['torsion']}")]
    t1 = reports["theorem1"]
    if t1 is not None and t1.verdict == HYPOTHESES_VIOLATED:
        out.append(f"identity entries {rep.identity_entries}: the single-identity criterion does not apply")
        if t1.witnesses:
            out.append("an all-identity row yields translations X_k -> X_k + b, which are automorphisms "
                       "but not linear ones, even though E = 0 is " + str(rep.e_module["is_zero"]).lower())
    if rep.permutation_symmetries and len(rep.permutation_symmetries) == factorial(q.n):
        out.append(f"all {len(rep.permutation_symmetries)} permutations are admissible")
    if not rep.lambda_invariants["rank"] and not rep.lambda_invariants["torsion"]:
        out.append(f"commutative: the dimension is n = {q.n}")
    out.append(f"verdict: {rep.verdict}" + (f" via {rep.route}" if rep.route else ""))
    return out


def _read_spec(path: str) -> QMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseFailure(f"cannot read {path}: {exc}") from exc
    try:
        return parse_spec(text)
    except SpecError as exc:
        raise ParseFailure(f"{path}: {exc}") from exc
    except (ValueError, TypeError, AttributeError) as exc:
        raise ParseFailure(f"{path}: {exc}") from exc


def cmd_analyze(path: str, bound: int = 3, perm_cap: int = DEFAULT_PERM_CAP,
                skip_oracle: bool = False) -> AnalysisReport:
    return analyze(_read_spec(path), bound, perm_cap, skip_oracle)


def cmd_examples(name: str, n: Optional[int] = None, r: Optional[int] = None) -> str:
    return serialize(builders.build(name, n, r))


def cmd_verify(path: str, witness_path: str) -> dict:
    q = _read_spec(path)
    try:
        doc = json.loads(Path(witness_path).read_text())
        forward = AutomorphismSpec.from_json(doc["forward"])
        inverse = AutomorphismSpec.from_json(doc["inverse"]) if "inverse" in doc else forward.inverse()
        forward.validate(q.n)
        inverse.validate(q.n)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseFailure(f"malformed witness {witness_path}: {exc}") from exc
    out = check_automorphism_pair(q, forward, inverse).to_json()
    out["forward"] = forward.describe()
    out["inverse"] = inverse.describe()
    return out


def _dump(obj, pretty: bool) -> str:
    return json.dumps(obj, indent=2 if pretty else None, sort_keys=False) + "\n"


def _human(rep: AnalysisReport) -> str:
    lines = list(rep.summary)
    lines.append(f"radical basis: {rep.radical_basis or 'trivial'}")
    lines.append(f"E = 0: {rep.e_module['is_zero']}")
    lines.append(f"admissible permutations: {', '.join(rep.permutation_symmetries)}")
    for r in rep.routes:
        lines.append(f"  {r['name']}: {r['verdict']} ({r['route']})")
    for c in rep.witness_verification:
        status = {True: "verified", False: "FAILED", None: "not checked"}[c["verified"]]
        lines.append(f"  witness [{c['route']}] {c['witness']}: {status}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtorus", description="Rigidity analysis for quantum affine spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the decision pipeline on a spec file")
    a.add_argument("spec")
    a.add_argument("--bound", type=int, default=3, help="box bound for the commuting-pair search")
    a.add_argument("--perm-cap", type=int, default=DEFAULT_PERM_CAP, help="largest n for permutation enumeration")
    a.add_argument("--skip-oracle", action="store_true", help="do not re-verify witnesses in the algebra")
    fmt = a.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="compact JSON report")
    fmt.add_argument("--pretty", action="store_true", help="indented JSON report")

    e = sub.add_parser("examples", help="write a bundled example spec")
    e.add_argument("name", choices=sorted(builders.BUILDERS))
    e.add_argument("--n", type=int)
    e.add_argument("--r", type=int)
    e.add_argument("-o", "--output", help="output path (default: stdout)")

    v = sub.add_parser("verify", help="check an automorphism witness with the algebra oracle")
    v.add_argument("spec")
    v.add_argument("witness")
    v.add_argument("--pretty", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            if args.bound < 1:
                raise ParseFailure("--bound must be >= 1")
            rep = cmd_analyze(args.spec, args.bound, args.perm_cap, args.skip_oracle)
            if args.json or args.pretty:
                sys.stdout.write(_dump(rep.to_json(), args.pretty))
            else:
                sys.stdout.write(_human(rep))
            return EXIT_OK
        if args.command == "examples":
            try:
                text = cmd_examples(args.name, args.n, args.r)
            except ValueError as exc:
                raise ParseFailure(str(exc)) from exc
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        out = cmd_verify(args.spec, args.witness)
        sys.stdout.write(_dump(out, args.pretty))
        return EXIT_OK if out["ok"] else EXIT_FAIL
    except ParseFailure as exc:
        print(f"qtorus: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"qtorus: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
