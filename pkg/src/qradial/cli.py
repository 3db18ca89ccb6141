"""Command-line front end: ``qradial <command> [options]``.

Commands
  identities  check the identity suite through a given order
  coeffs      print coefficients of a catalog series
  limit       exact radial limit values at a root of unity
  radial      sample a radial difference and extrapolate
  quotient    sample the rank/crank quotient near a root of unity
  qzeta       find the polynomial relation for a q-zeta value

Exit codes: 0 ok, 1 a verification failed, 2 usage or I/O error,
3 precision guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath
from mpmath import mp

from .catalog import SeriesId, SeriesTag, expand
from .exactnum import Cyclo, cyclo_embed, cyclo_root, format_cyclo
from .identities import (
    IdentityId,
    IdentityReport,
    Mismatch,
    RelationResult,
    find_qzeta_relation,
    run_suite,
)
from .numeric import NonConvergenceError, PrecisionGuardError
from .radial import (
    ForParams,
    RadialPath,
    RadialReport,
    RadialSample,
    RootSpec,
    collapsing_residue,
    decomposed_radial_check,
    for1_value,
    for2_value,
    for3_value,
    quotient_limit_check,
    radial_diff_report,
    theta_multiplier,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3

COMMANDS = ("identities", "coeffs", "limit", "radial", "quotient", "qzeta")
DEFAULT_TOL = {"radial": 1e-4, "quotient": 1e-2}
EMBED_DIGITS = 50
DIGITS_ENV = "QRADIAL_DIGITS"


class UsageError(ValueError):
    """Bad parameters; reported before any computation starts."""


# ---------------------------------------------------------------------------
# root-of-unity syntax
# ---------------------------------------------------------------------------


def parse_root(text: str) -> Cyclo:
    """``zK`` is zeta_K, ``zK^j`` its j-th power, ``-1`` an alias for z2."""
    s = text.strip()
    if s in ("-1", "z2"):
        return cyclo_root(2, 1)
    if not s.startswith("z"):
        raise UsageError(f"cannot parse root of unity {text!r} (use zK, zK^j or -1)")
    body = s[1:]
    j = 1
    if "^" in body:
        body, e = body.split("^", 1)
        try:
            j = int(e)
        except ValueError:
            raise UsageError(f"bad exponent in {text!r}") from None
    try:
        k = int(body)
    except ValueError:
        raise UsageError(f"bad root order in {text!r}") from None
    if k < 1:
        raise UsageError(f"root order must be positive in {text!r}")
    return cyclo_root(k, j)


def parse_root_list(text: str) -> list[Cyclo]:
    items = [x for x in text.split(",") if x.strip()]
    if not items:
        raise UsageError("empty root list")
    return [parse_root(x) for x in items]


def root_label(w: Cyclo) -> str:
    for j in range(w.order):
        if cyclo_root(w.order, j) == w:
            return "-1" if (w.order, j) == (2, 1) else (f"z{w.order}" if j == 1 else f"z{w.order}^{j}")
    return format_cyclo(w)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _dec(x, digits: int) -> str:
    with mp.workdps(digits + 5):
        return mpmath.nstr(mpmath.mpf(x), digits)


def value_to_json(x) -> Any:
    """Exact values: rationals as strings, Cyclo as order + coefficient vector + decimals."""
    if isinstance(x, Cyclo):
        v = cyclo_embed(x, EMBED_DIGITS).value
        return {
            "order": x.order,
            "coeffs": [str(c) for c in x.coeffs],
            "symbol": format_cyclo(x),
            "re": _dec(v.real, EMBED_DIGITS),
            "im": _dec(v.imag, EMBED_DIGITS),
        }
    return str(Fraction(x))


def value_from_json(obj):
    if isinstance(obj, dict):
        return Cyclo(int(obj["order"]), [Fraction(c) for c in obj["coeffs"]])
    return Fraction(obj)


def identity_to_json(r: IdentityReport) -> dict:
    mm = None
    if r.first_mismatch is not None:
        mm = {
            "n": r.first_mismatch.n,
            "lhs": value_to_json(r.first_mismatch.lhs),
            "rhs": value_to_json(r.first_mismatch.rhs),
        }
    return {
        "identity": r.identity.value,
        "order": r.order,
        "w": None if r.w is None else value_to_json(r.w),
        "status": r.status,
        "first_mismatch": mm,
    }


def identity_from_json(obj: dict) -> IdentityReport:
    mm = obj.get("first_mismatch")
    if mm is not None:
        mm = Mismatch(int(mm["n"]), value_from_json(mm["lhs"]), value_from_json(mm["rhs"]))
    w = obj.get("w")
    return IdentityReport(
        IdentityId(obj["identity"]),
        int(obj["order"]),
        None if w is None else value_from_json(w),
        obj["status"],
        mm,
    )


def radial_to_json(r: RadialReport) -> dict:
    d = r.digits or 30
    samples = [
        {"t": s.t, "r": _dec(s.r, d), "re": _dec(s.value.real, d), "im": _dec(s.value.imag, d)}
        for s in r.samples
    ]
    ext = None
    if r.extrapolated is not None:
        ext = {"re": _dec(r.extrapolated.real, d), "im": _dec(r.extrapolated.imag, d)}
    return {
        "samples": samples,
        "extrapolated": ext,
        "error_estimate": None if r.error_estimate is None else _dec(r.error_estimate, 15),
        "exact_target": None if r.exact_target is None else value_to_json(r.exact_target),
        "agreement": None if r.agreement is None else _dec(r.agreement, 15),
        "digits": r.digits,
        "failed": [[t, msg] for t, msg in r.failed],
    }


def radial_from_json(obj: dict) -> RadialReport:
    d = int(obj.get("digits") or 30)
    with mp.workdps(d + 10):
        samples = [
            RadialSample(int(s["t"]), mpmath.mpf(s["r"]), mpmath.mpc(s["re"], s["im"]))
            for s in obj["samples"]
        ]
        ext = obj.get("extrapolated")
        ext = None if ext is None else mpmath.mpc(ext["re"], ext["im"])
        err = obj.get("error_estimate")
        agr = obj.get("agreement")
        return RadialReport(
            samples,
            ext,
            None if err is None else mpmath.mpf(err),
            None if obj.get("exact_target") is None else value_from_json(obj["exact_target"]),
            None if agr is None else mpmath.mpf(agr),
            d,
            [(int(t), str(msg)) for t, msg in obj.get("failed", [])],
        )


def relation_to_json(r: RelationResult) -> dict:
    return {
        "weight": r.weight,
        "found": r.found,
        "normalizing_constant": None if r.normalizing_constant is None else str(r.normalizing_constant),
        "monomials": [{"Q": i, "R": j, "coefficient": str(c)} for i, j, c in r.monomials],
        "verified_order": r.verified_order,
        "unique": r.unique,
    }


def relation_text(r: RelationResult) -> str:
    if not r.found:
        return f"weight {r.weight}: no relation 1 + c*zeta_q({r.weight}) in Q, R"
    mono = []
    for i, j, c in r.monomials:
        name = "*".join(["Q"] * i + ["R"] * j) or "1"
        mono.append(f"{c}*{name}" if c != 1 else name)
    c = r.normalizing_constant
    sign = "-" if c < 0 else "+"
    return (f"1 {sign} {abs(c)}*zeta_q({r.weight}) = {' + '.join(mono)}"
            f"   (verified to order {r.verified_order})")


# ---------------------------------------------------------------------------
# emitting
# ---------------------------------------------------------------------------


@dataclass
class Output:
    """What a command produced, before formatting."""

    kind: str                      # identities | radial | coeffs | limit | qzeta
    payload: Any
    ok: bool = True
    notes: list[str] = field(default_factory=list)


def _csv_text(header: list[str], rows: list[list], footer: list[str]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _radial_footer(r: RadialReport) -> list[str]:
    js = radial_to_json(r)
    out = []
    if js["extrapolated"] is not None:
        out.append(f"extrapolated,{js['extrapolated']['re']},{js['extrapolated']['im']}")
    if js["error_estimate"] is not None:
        out.append(f"error_estimate,{js['error_estimate']}")
    if r.exact_target is not None:
        t = js["exact_target"]
        out.append(f"exact_target,{t['symbol']},{t['re']},{t['im']}")
    if js["agreement"] is not None:
        out.append(f"agreement,{js['agreement']}")
    for t, msg in r.failed:
        out.append(f"failed,{t},{msg}")
    return out


def render(out: Output, fmt: str) -> str:
    fmt = fmt.lower()
    p = out.payload
    if out.kind == "identities":
        if fmt == "json":
            return json.dumps([identity_to_json(r) for r in p], indent=2) + "\n"
        rows = []
        for r in p:
            j = identity_to_json(r)
            mm = j["first_mismatch"]
            rows.append([r.identity.value, r.order, "" if r.w is None else root_label(r.w),
                         r.status, "" if mm is None else mm["n"]])
        if fmt == "csv":
            npass = sum(r.passed for r in p)
            return _csv_text(["identity", "order", "w", "status", "first_mismatch"], rows,
                             [f"passed,{npass},of,{len(p)}"])
        lines = []
        for (ident, order, w, status, n), r in zip(rows, p):
            tag = f"{ident}" + (f" w={w}" if w else "")
            line = f"{status.upper():4}  {tag}  order={order}"
            if r.first_mismatch is not None:
                m = r.first_mismatch
                line += f"  first mismatch at q^{n}: lhs={m.lhs} rhs={m.rhs}"
            lines.append(line)
        lines.append(f"{sum(r.passed for r in p)}/{len(p)} identities pass")
        return "\n".join(lines) + "\n"

    if out.kind == "radial":
        r: RadialReport = p
        if fmt == "json":
            return json.dumps(radial_to_json(r), indent=2) + "\n"
        js = radial_to_json(r)
        rows = [[s["t"], s["r"], s["re"], s["im"]] for s in js["samples"]]
        if fmt == "csv":
            return _csv_text(["t", "r", "re", "im"], rows, _radial_footer(r))
        lines = [f"t={t:3d}  r={rr}  D={re} + {im}i" for t, rr, re, im in rows]
        lines += _radial_footer(r)
        lines += out.notes
        return "\n".join(lines) + "\n"

    if out.kind == "coeffs":
        label, coeffs = p
        vals = [value_to_json(c) for c in coeffs]
        if fmt == "json":
            return json.dumps({"series": label, "order": len(coeffs) - 1, "coeffs": vals},
                              indent=2) + "\n"
        rows = [[n, str(c)] for n, c in enumerate(coeffs)]
        if fmt == "csv":
            return _csv_text(["n", "coefficient"], rows, [f"series,{label}"])
        return "\n".join(f"{n:4d}  {c}" for n, c in rows) + "\n"

    if out.kind == "limit":
        if fmt == "json":
            return json.dumps({k: (value_to_json(v) if isinstance(v, Cyclo) else v)
                               for k, v in p.items()}, indent=2) + "\n"
        rows = []
        for k, v in p.items():
            if isinstance(v, Cyclo):
                e = cyclo_embed(v, EMBED_DIGITS).value
                rows.append([k, format_cyclo(v), _dec(e.real, EMBED_DIGITS), _dec(e.imag, EMBED_DIGITS)])
            else:
                rows.append([k, str(v), "", ""])
        if fmt == "csv":
            return _csv_text(["quantity", "exact", "re", "im"], rows, [])
        lines = []
        for k, sym, re, im in rows:
            lines.append(f"{k}: {sym}" + (f"\n  ~ {re} + {im}i" if re else ""))
        return "\n".join(lines) + "\n"

    if out.kind == "qzeta":
        if fmt == "json":
            return json.dumps(relation_to_json(p), indent=2) + "\n"
        if fmt == "csv":
            js = relation_to_json(p)
            rows = [[m["Q"], m["R"], m["coefficient"]] for m in js["monomials"]]
            return _csv_text(["Q", "R", "coefficient"], rows,
                             [f"weight,{p.weight}", f"found,{p.found}",
                              f"normalizing_constant,{js['normalizing_constant']}",
                              f"verified_order,{p.verified_order}"])
        return relation_text(p) + "\n"

    raise ValueError(f"unknown output kind {out.kind!r}")


def emit(out: Output, fmt: str, sink: str | None) -> None:
    """Write a rendered report to ``sink`` (a path) or stdout. I/O errors raise OSError."""
    text = render(out, fmt)
    if sink is None or sink == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _parse_injections(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        parts = item.split(":")
        if len(parts) not in (2, 3):
            raise UsageError(f"--inject expects IDENTITY:n[:delta], got {item!r}")
        try:
            ident = IdentityId(parts[0].upper())
        except ValueError:
            raise UsageError(f"unknown identity {parts[0]!r}") from None
        try:
            n = int(parts[1])
            delta = Fraction(parts[2]) if len(parts) == 3 else Fraction(1)
        except ValueError:
            raise UsageError(f"bad injection {item!r}") from None
        out[ident] = (n, delta)
    return out


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs --{', --'.join(missing)}")


def _path(args) -> RadialPath:
    try:
        return RadialPath(args.tmin, args.tmax, args.digits)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _for_params(args) -> ForParams:
    _require(args, "a", "b", "h", "m")
    try:
        return ForParams.make(args.a, args.b, args.h, args.m)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_identities(args) -> Output:
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    ws = parse_root_list(args.w or "-1,z3,z4,z6")
    if any(w == 1 for w in ws):
        raise UsageError("w = 1 is not allowed")
    inject = _parse_injections(args.inject)
    for ident, (n, _) in inject.items():
        if not 0 <= n <= args.order:
            raise UsageError(f"injection index {n} outside 0..{args.order}")
    reports = run_suite(args.order, ws, perturb=inject)
    return Output("identities", reports, ok=all(r.passed for r in reports))


def cmd_coeffs(args) -> Output:
    _require(args, "series")
    try:
        tag = SeriesTag(args.series.upper())
    except ValueError:
        raise UsageError(f"unknown series {args.series!r}") from None
    w = parse_root(args.w) if args.w else None
    try:
        sid = SeriesId(tag, w, args.s)
    except ValueError as e:
        raise UsageError(str(e)) from None
    s = expand(sid, args.order)
    label = tag.value + (f"(w={root_label(w)})" if w is not None else "") + (
        f"(s={args.s})" if args.s is not None else "")
    return Output("coeffs", (label, list(s.coeffs)))


def cmd_limit(args) -> Output:
    vals: dict[str, Any] = {}
    if args.k is not None:
        h = args.h if args.h is not None else 1
        try:
            root = RootSpec(h, 2 * args.k)
        except ValueError as e:
            raise UsageError(str(e)) from None
        vals["root"] = f"zeta_{root.m}^{root.h}"
        vals["for1"] = for1_value(args.k, root)
        vals["for2"] = for2_value(args.k, root)
        return Output("limit", vals, ok=vals["for1"] == vals["for2"])
    p = _for_params(args)
    vals["for3"] = for3_value(p)
    vals["theta_multiplier"] = theta_multiplier(p)
    vals["collapsing_residue"] = collapsing_residue(p)
    return Output("limit", vals)


def _radial_ok(rep: RadialReport, tol: float) -> bool:
    return rep.agreement is not None and rep.agreement < tol and not rep.failed


def _guard_check(rep: RadialReport):
    if rep.failed and not rep.samples:
        raise PrecisionGuardError("; ".join(f"t={t}: {m}" for t, m in rep.failed))


def cmd_radial(args) -> Output:
    path = _path(args)
    mode = (args.mode or "for1").lower()
    tol = args.tol if args.tol is not None else DEFAULT_TOL["radial"]
    if mode == "for1":
        _require(args, "k")
        h = args.h if args.h is not None else 1
        rep = radial_diff_report("for1", (args.k, h), path, route=args.route)
    elif mode == "for3":
        rep = radial_diff_report("for3", _for_params(args), path, route=args.route)
    elif mode == "decomposed":
        _require(args, "k")
        h = args.h if args.h is not None else 1
        rep = decomposed_radial_check(args.k, path, h)
    else:
        raise UsageError(f"unknown --mode {mode!r} (for1, for3, decomposed)")
    _guard_check(rep)
    notes = []
    for key in ("prefactor_monotone", "tr_sum_box", "u_extrapolated_distance"):
        if key in rep.diagnostics:
            notes.append(f"# {key},{rep.diagnostics[key]}")
    return Output("radial", rep, ok=_radial_ok(rep, tol), notes=notes)


def cmd_quotient(args) -> Output:
    path = _path(args)
    tol = args.tol if args.tol is not None else DEFAULT_TOL["quotient"]
    rep = quotient_limit_check(_for_params(args), path)
    _guard_check(rep)
    return Output("radial", rep, ok=_radial_ok(rep, tol))


def cmd_qzeta(args) -> Output:
    _require(args, "s")
    if args.s < 2 or args.s % 2:
        raise UsageError("--s must be an even weight >= 2")
    res = find_qzeta_relation(args.s, args.order, verify_order=args.verify)
    return Output("qzeta", res)


HANDLERS = {
    "identities": cmd_identities,
    "coeffs": cmd_coeffs,
    "limit": cmd_limit,
    "radial": cmd_radial,
    "quotient": cmd_quotient,
    "qzeta": cmd_qzeta,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return 60


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qradial",
        description="Exact identity checks and radial limits of mock theta functions.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--order", type=int, default=None, help="truncation order N")
    ap.add_argument("--w", default=None, help="roots of unity, e.g. -1,z3,z4,z6")
    ap.add_argument("--series", default=None, help="catalog tag for coeffs (F, B, RANK, ...)")
    ap.add_argument("--s", type=int, default=None, help="q-zeta weight")
    ap.add_argument("--verify", type=int, default=None, help="re-verification order for qzeta")
    ap.add_argument("--k", type=int, default=None)
    ap.add_argument("--a", type=int, default=None)
    ap.add_argument("--b", type=int, default=None)
    ap.add_argument("--h", type=int, default=None)
    ap.add_argument("--m", type=int, default=None)
    ap.add_argument("--mode", default=None, help="radial mode: for1, for3, decomposed")
    ap.add_argument("--route", default="appell", choices=("appell", "direct"))
    ap.add_argument("--digits", type=int, default=None)
    ap.add_argument("--tmin", type=int, default=2)
    ap.add_argument("--tmax", type=int, default=10)
    ap.add_argument("--tol", type=float, default=None)
    ap.add_argument("--inject", action="append", default=[],
                    help="perturb an identity's right side: IDENTITY:n[:delta]")
    ap.add_argument("--format", default="text", choices=("text", "json", "csv"))
    ap.add_argument("--output", default=None, help="output file (default stdout)")
    return ap


_DEFAULT_ORDER = {"identities": 200, "coeffs": 20, "qzeta": 60}


def _glue_values(argv: list[str]) -> list[str]:
    # "--w -1,z3" would otherwise be read as an unknown option "-1,z3"
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--w" and i + 1 < len(argv):
            out.append(f"--w={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.order is None:
        args.order = _DEFAULT_ORDER.get(args.command, 20)
    if args.digits is None:
        args.digits = _default_digits()
    try:
        out = HANDLERS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionGuardError as e:
        print(f"precision guard: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except NonConvergenceError as e:
        print(f"no convergence: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        emit(out, args.format, args.output)
    except OSError as e:
        print(f"cannot write output: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if out.ok else EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
