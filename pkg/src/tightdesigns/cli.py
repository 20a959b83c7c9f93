"""Command-line front end.

Exit status: 0 when the analysis completed (whatever the mathematical
verdict), 2 on usage errors, 3 on bad input, 4 on internal errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import designs, hamming, scheme, triple
from .exactmath import Inconsistent, IrrationalSpectrum
from .oafile import OAFormatError, parse_oa_file, write_oa_file

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(ValueError):
    pass


@dataclass
class Report:
    command: str
    inputs: dict[str, Any]
    verdict: Any
    details: dict[str, Any] = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "inputs": self.inputs,
                "verdict": self.verdict,
                "details": self.details,
                "elapsed_ms": self.elapsed_ms,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        doc = json.loads(text)
        return cls(doc["command"], doc["inputs"], doc["verdict"], doc["details"], doc["elapsed_ms"])

    def to_text(self) -> str:
        fields = [("command", self.command)]
        if self.inputs:
            fields.append(("inputs", " ".join(f"{k}={_short(v)}" for k, v in self.inputs.items())))
        fields.append(("verdict", _short(self.verdict)))
        fields.extend((k, _short(v)) for k, v in self.details.items() if k != "table")
        fields.append(("elapsed", f"{self.elapsed_ms:.1f} ms"))
        width = max(len(k) for k, _ in fields)
        lines = [f"{k:<{width}} : {v}" for k, v in fields]
        table = self.details.get("table")
        if table:
            lines.append(_render_table(table))
        return "\n".join(lines)


def _short(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return str(value)


def _render_table(rows: list[dict]) -> str:
    cols = list(rows[0])
    cells = [[str(c) for c in cols]] + [["" if r[c] is None else str(r[c]) for c in cols] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells)


def _s(x) -> str:
    return str(x)


def _int_range(text: str) -> list[int]:
    """``"5"``, ``"5,7,9"`` or inclusive ``"start:stop[:step]"``."""
    out = []
    try:
        for part in text.split(","):
            if ":" in part:
                bits = [int(b) for b in part.split(":")]
                start, stop = bits[0], bits[1]
                step = bits[2] if len(bits) > 2 else 1
                if step <= 0:
                    raise ValueError
                out.extend(range(start, stop + 1, step))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None
    return out


def _triple_type(text: str) -> tuple[int, int, int]:
    try:
        U, V, W = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected U,V,W, got {text!r}") from None
    return U, V, W


def _krein(text: str) -> scheme.KreinArray:
    try:
        return scheme.KreinArray.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path) -> hamming.PointSet:
    try:
        return parse_oa_file(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


# -- commands -------------------------------------------------------------


def cmd_rao(a):
    return hamming.rao_bound(a.n, a.q, a.e), {}


def cmd_krawtchouk(a):
    return _s(hamming.krawtchouk(a.n, a.q, a.i, a.x)), {}


def cmd_wilson_zeros(a):
    res = hamming.wilson_zeros(a.n, a.q, a.e)
    return list(res.zeros), {"exactly_e_zeros": res.has_e_zeros}


def cmd_noda_filter(a):
    rows = []
    for value in a.a:
        v = hamming.noda_congruences(value)
        rows.append(
            {
                "a": value,
                "passed": v.passed,
                "failed": "; ".join(v.failed()) or None,
                "parameters": None if v.parameters is None else list(v.parameters),
            }
        )
    verdict = "pass" if all(r["passed"] for r in rows) else "fail"
    if len(rows) > 1:
        verdict = [r["a"] for r in rows if r["passed"]]
    return verdict, {"table": rows}


def cmd_krein(a):
    ka = a.array
    sp = scheme.from_krein_array(ka)
    rep = scheme.feasibility_report(sp)
    zeros = scheme.krein_zero_set(sp)
    return ("feasible" if rep.passed else "infeasible"), {
        "q_antipodal": ka.is_q_antipodal(),
        "feasibility": rep.to_dict(),
        "krein_zeros": [list(t) for t in zeros],
        "krein_pattern_mismatches": [list(t) for t in zeros.mismatches],
        "parameters": sp.to_dict(),
    }


def cmd_triple(a):
    sp = scheme.from_krein_array(a.array)
    U, V, W = a.type
    ts = triple.build_system(sp, U, V, W, use_krein_zeros=not a.no_krein_zeros)
    details = {"equations": ts.matrix.nrows, "sum_equations": ts.sum_rows, "unknowns": len(ts.unknowns)}
    try:
        fam = triple.solve_parametric(ts, pin=a.pin)
    except Inconsistent as exc:
        return "infeasible", {**details, "reason": "inconsistent-system", "witness_row": exc.row}
    verdict = triple.integer_feasible(fam, budget=a.budget)
    details.update(
        dimension=fam.dimension,
        free_unknowns=[list(t) for t in fam.free_unknowns()],
        reason=verdict.reason,
        witnesses=[list(w) for w in verdict.witnesses],
        expressions={
            f"[{i} {j} {k}]": [_s(c)] + [_s(d) for d in ds]
            for (i, j, k) in fam.system.unknowns
            for c, ds in [fam.expression(i, j, k)]
        },
    )
    return verdict.status, details


def cmd_scan_noda(a):
    rows = triple.scan_noda(a.r, jobs=a.jobs)
    table = [
        {
            "r": row.r,
            "status": row.status,
            "reason": row.reason,
            "dim": row.dimension,
            "p111": None if row.p111 is None else _s(row.p111),
            "vertices": None if row.vertex_count is None else _s(row.vertex_count),
            "witnesses": row.witnesses,
            "detail": row.detail,
        }
        for row in rows
    ]
    feasible = [row.r for row in rows if row.status == "feasible"]
    return {"feasible_r": feasible}, {"table": table}


def cmd_design(a):
    C = designs.known_design(a.name)
    write_oa_file(C, a.out, comment=a.name)
    inner = hamming.inner_distribution(C)
    return "written", {
        "path": a.out,
        "size": len(C),
        "n": C.n,
        "q": C.q,
        "strength": hamming.design_strength(C),
        "degree_set": list(inner.degree_set),
    }


def _describe(C) -> dict:
    inner = hamming.inner_distribution(C)
    t = hamming.design_strength(C, verify_up_to=4)
    return {
        "size": len(C),
        "n": C.n,
        "q": C.q,
        "strength": t,
        "inner_distribution": [_s(x) for x in inner.a],
        "degree_set": list(inner.degree_set),
        "rao_bound_e2": hamming.rao_bound(C.n, C.q, 2) if C.n >= 2 else None,
    }


def cmd_verify(a):
    C = _load(a.input)
    info = _describe(C)
    if a.strength is None:
        return info["strength"], info
    return ("confirmed" if info["strength"] >= a.strength else "refuted"), info


def cmd_derive_scheme(a):
    C = _load(a.input)
    try:
        es = designs.derived_scheme(C)
    except designs.NotTight as exc:
        return "not-tight", {"reason": str(exc)}
    sp = es.parameters
    fission = designs.fission_check(C)
    return "q-antipodal-4-class", {
        "vertices": len(es),
        "krein_array": sp.krein_array.compact(),
        "expected_krein_array": scheme.qant4_krein_array(C.n, C.q).compact(),
        "fission": fission.ok,
        "feasibility": scheme.feasibility_report(sp).passed,
        "parameters": sp.to_dict(),
    }


def cmd_fiber(a):
    C = _load(a.input)
    parts = designs.fibers(C)
    if not 0 <= a.index < len(parts):
        raise InputError(f"fiber index must be in 0..{len(parts) - 1}")
    F = parts[a.index]
    info = _describe(F)
    try:
        es = designs.t2s2_scheme(F)
    except designs.PreconditionFailed as exc:
        return "precondition-failed", {**info, "reason": str(exc)}
    if es.D != 2:
        return "not-two-class", info
    sp = es.parameters
    counted = {
        al: [int(sp.vertex_count), int(sp.valencies[i]), int(sp.p(i, i, i)), int(sp.p(i, i, 3 - i))]
        for i, al in enumerate(info["degree_set"], start=1)
    }
    analytic = hamming.fiber_subscheme_params(F.n, F.q, len(F), info["degree_set"], info["strength"])
    analytic_srg = {al: list(v) for al, v in analytic.srg.items()}
    return ("match" if counted == analytic_srg else "mismatch"), {
        **info,
        "srg_counted": {str(k): v for k, v in counted.items()},
        "srg_analytic": {str(k): v for k, v in analytic_srg.items()},
    }


def cmd_triples_count(a):
    C = _load(a.input)
    es = designs.derived_scheme(C)
    N = len(es)
    for name in ("u", "v", "w"):
        if not 0 <= getattr(a, name) < N:
            raise InputError(f"vertex {name} must be in 0..{N - 1}")
    u, v, w = a.u, a.v, a.w
    R = es.relations
    U, V, W = int(R[v, w]), int(R[u, w]), int(R[u, v])
    tensor = triple.brute_force_triples(es, u, v, w)
    sp = es.parameters
    violations = triple.identity_violations(sp, tensor, U, V, W)
    fam = triple.solve_parametric(triple.build_system(sp, U, V, W))
    in_family = fam.contains(fam.system.interior(tensor))
    return ("consistent" if not violations and in_family else "inconsistent"), {
        "type": [U, V, W],
        "labels": [list(es.labels[x][1]) for x in (u, v, w)],
        "tensor": tensor.tolist(),
        "violations": violations,
        "in_family": in_family,
    }


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")

    p = argparse.ArgumentParser(prog="tightdesigns", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("rao", cmd_rao, "Rao bound sum_{k<=e} C(n,k)(q-1)^k")
    for opt in ("n", "q", "e"):
        sp.add_argument(f"--{opt}", type=int, required=True)

    sp = add("krawtchouk", cmd_krawtchouk, "evaluate K_{n,q,i}(x)")
    for opt in ("n", "q", "i", "x"):
        sp.add_argument(f"--{opt}", type=int, required=True)

    sp = add("wilson-zeros", cmd_wilson_zeros, "integral zeros of sum_{j<=e} K_j(x) in [1, n]")
    for opt in ("n", "q", "e"):
        sp.add_argument(f"--{opt}", type=int, required=True)

    sp = add("noda-filter", cmd_noda_filter, "congruence conditions on a")
    sp.add_argument("--a", type=_int_range, required=True, help="value, list or start:stop[:step]")

    sp = add("krein", cmd_krein, "parameters and feasibility from a Krein array")
    sp.add_argument("--array", type=_krein, required=True, help='"b0,b1,...;c1,c2,..."')

    sp = add("triple", cmd_triple, "triple intersection numbers for a Krein array")
    sp.add_argument("--array", type=_krein, required=True)
    sp.add_argument("--type", type=_triple_type, default=(1, 1, 1), help="U,V,W (default 1,1,1)")
    sp.add_argument("--no-krein-zeros", action="store_true")
    sp.add_argument("--pin", choices=triple.PIN_POLICIES, default="structural")
    sp.add_argument("--budget", type=int, default=triple.DEFAULT_BUDGET)

    sp = add("scan-noda", cmd_scan_noda, "triple-intersection scan over the r-family")
    sp.add_argument("--r", type=_int_range, required=True, help="e.g. 5:41:2")
    sp.add_argument("--jobs", type=int, default=1)

    sp = add("design", cmd_design, "write a known tight 4-design as an OA file")
    sp.add_argument("--name", choices=designs.DESIGN_NAMES, required=True)
    sp.add_argument("--out", required=True)

    sp = add("verify", cmd_verify, "strength and distance data of an OA file")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--strength", type=int)

    sp = add("derive-scheme", cmd_derive_scheme, "4-class scheme on the fibers of a tight 4-design")
    sp.add_argument("--in", dest="input", required=True)

    sp = add("fiber", cmd_fiber, "2-class scheme on one fiber of a design")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--index", type=int, default=0)

    sp = add("triples-count", cmd_triples_count, "count triple intersection numbers in the derived scheme")
    sp.add_argument("--in", dest="input", required=True)
    for opt in ("u", "v", "w"):
        sp.add_argument(f"--{opt}", type=int, required=True)
    return p


def execute(argv=None, out=None, err=None) -> tuple[Report | None, int]:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, EXIT_OK if exc.code == 0 else EXIT_USAGE
    inputs = {
        k: (v.compact() if isinstance(v, scheme.KreinArray) else v)
        for k, v in vars(args).items()
        if k not in ("func", "command", "format")
    }
    start = time.perf_counter()
    try:
        verdict, details = args.func(args)
    except (InputError, OAFormatError, KeyError) as exc:
        print(f"error: {exc}", file=err)
        return None, EXIT_INPUT
    except (ValueError, IrrationalSpectrum) as exc:
        kind = "internal" if isinstance(exc, (designs.NotAScheme, designs.KreinMismatch)) else "input"
        print(f"{kind} error: {exc}", file=err)
        return None, EXIT_INTERNAL if kind == "internal" else EXIT_INPUT
    except (AssertionError, RuntimeError, ArithmeticError) as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return None, EXIT_INTERNAL
    report = Report(args.command, inputs, verdict, details, round((time.perf_counter() - start) * 1000, 3))
    print(report.to_json() if args.format == "structured" else report.to_text(), file=out)
    return report, EXIT_OK


def main(argv=None) -> int:
    _, status = execute(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
