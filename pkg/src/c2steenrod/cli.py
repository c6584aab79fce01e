"""Command line front end.

Every subcommand builds a report {command, status, payload, witness}; status
is ok, fail or undetermined.  Exit codes: 0 ok, 1 fail, 2 undetermined or
budget, 3 usage.  ``--format json`` prints the report with sorted keys, so
identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import cobar as K
from . import dual as D
from . import ops as O
from . import series as S
from .parse import ParseError, kind_of, parse_expression, render_expression
from .point import PointElem, render_class

EXIT = {"ok": 0, "fail": 1, "undetermined": 2}
USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _report(cmd: str, status: str, payload, witness: Optional[str] = None, text: Optional[str] = None) -> dict:
    return {"command": cmd, "status": status, "payload": payload, "witness": witness, "_text": text}


# ---------------------------------------------------------------- helpers


def _elem(text: str, kind: Optional[str] = None):
    try:
        return parse_expression(text, kind)
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def _as_dual(x):
    if isinstance(x, PointElem):
        return D.from_point(x)
    if isinstance(x, D.ASElem):
        return x
    raise UsageError(f"expected an element of A, got a {kind_of(x)} expression")


def _named_series(name: str, ceiling: int) -> S.LaurentSeries:
    table = {"xi": S.xi_series, "tau": S.tau_series, "xibar": S.xibar_series, "taubar": S.taubar_series}
    if name in table:
        return table[name](ceiling)
    x = _elem(name, "series")
    return x if x.ceiling <= ceiling else x.truncate(ceiling)


def _terms_json(x: D.ASElem) -> List[dict]:
    return [{"coefficient": render_class(m.coeff),
             "monomial": D.render_mono(D.ASMono(D.UNIT, m.xi, m.tau))} for m in x.sorted_terms()]


def _tensor_json(x: D.TensorElem) -> List[dict]:
    out = []
    for t in x.sorted_terms():
        out.append({"coefficient": render_class(t[0].coeff),
                    "factors": [D.render_mono(D.ASMono(D.UNIT, f.xi, f.tau)) for f in t]})
    return out


def _bmu_tensor_json(x: O.BmuTensor) -> List[dict]:
    out = []
    for (e, j) in sorted(x.parts, key=lambda k: (k[0] + k[1], k[0])):
        for m in x.parts[(e, j)].sorted_terms():
            out.append({"coefficient": render_class(m.coeff), "left-factor": O.render_bmu_mono(e, j),
                        "right-factor": D.render_mono(D.ASMono(D.UNIT, m.xi, m.tau))})
    return out


# ---------------------------------------------------------------- commands


def cmd_conjugate(args) -> dict:
    if args.elem is not None:
        x = _as_dual(_elem(args.elem))
        y = D.conjugate(x)
        return _report("conjugate", "ok", {"input": D.render(x), "result": D.render(y)}, text=D.render(y))
    if args.gen is None or args.index is None:
        raise UsageError("conjugate needs --elem, or --gen and --index")
    p = S.conjugate_xi(args.index) if args.gen == "xi" else S.conjugate_tau(args.index)
    r = S.render_poly(p)
    return _report("conjugate", "ok", {"generator": f"{args.gen}{args.index}", "result": r}, text=r)


def cmd_coeff(args) -> dict:
    f = _named_series(args.series, args.ceiling)
    if args.power != 1:
        f = S.power(f, args.power)
    if args.times_tau:
        f = f * _named_series(args.times_tau, args.ceiling)
    p = S.coeff(f, args.index)
    r = S.render_poly(p)
    return _report("coeff", "ok", {"series": args.series, "power": args.power, "index": args.index,
                                   "result": r}, text=r)


def cmd_compose(args) -> dict:
    f = _named_series(args.f, args.ceiling)
    g = _named_series(args.g, args.ceiling)
    h = S.compose(f, g)
    r = S.render_series(h)
    return _report("compose", "ok", {"f": args.f, "g": args.g, "result": r}, text=r)


def cmd_normal_form(args) -> dict:
    x = _elem(args.elem, args.kind)
    r = render_expression(x)
    return _report("normal-form", "ok", {"kind": kind_of(x), "result": r}, text=r)


def cmd_psi(args) -> dict:
    x = _as_dual(_elem(args.elem))
    y = D.psi(x)
    return _report("psi", "ok", {"input": D.render(x), "terms": _tensor_json(y)}, text=D.render_tensor(y))


def cmd_etar(args) -> dict:
    x = _elem(args.elem, "point")
    y = D.eta_R(x, args.ceiling)
    return _report("etar", "ok", {"input": render_expression(x), "terms": _terms_json(y)}, text=D.render(y))


def cmd_bockstein(args) -> dict:
    x = _elem(args.elem)
    if isinstance(x, O.BmuElem):
        y = O.bmu_bockstein(x)
    else:
        y = D.bockstein(_as_dual(x))
    r = render_expression(y)
    return _report("bockstein", "ok", {"input": render_expression(x), "result": r}, text=r)


def cmd_coaction(args) -> dict:
    if args.ops:
        g = O.OpsGen(*_ops_gen(args.ops))
        co = O.psi_L_ops(g, args.rmin)
        terms = [{"coefficient": render_class(m.coeff), "left-factor": D.render_mono(D.ASMono(D.UNIT, m.xi, m.tau)),
                  "right-factor": O.render_ops_gen(h)}
                 for h in sorted(co, key=lambda h: (h.s, h.sigma)) for m in co[h].sorted_terms()]
        text = " + ".join(f"{t['coefficient'] + '*' if t['coefficient'] != '1' else ''}{t['left-factor']}"
                          f" (x) {t['right-factor']}" for t in terms) or "0"
        return _report("coaction", "ok", {"input": O.render_ops_gen(g), "r_min": args.rmin, "terms": terms},
                       text=text)
    x = _elem(args.elem, "bmu")
    y = O.bmu_coaction(x, args.cap)
    return _report("coaction", "ok", {"input": O.render_bmu(x), "cap": args.cap, "terms": _bmu_tensor_json(y)},
                   text=O.render_bmu_tensor(y))


def _ops_gen(text: str):
    q = O.parse_qsymbol(text)
    return q.s, q.sigma


def cmd_qop(args) -> dict:
    q = O.parse_qsymbol(args.op)
    x = _elem(args.elem)
    if isinstance(x, O.BmuElem):
        y = O.q_on_bmu(q, x)
    else:
        y = O.q_on_dual_steenrod(q, _as_dual(x), mode=args.mode)
    r = render_expression(y)
    return _report("qop", "ok", {"op": O.render_qsymbol(q), "input": render_expression(x), "mode": args.mode,
                                 "result": r}, text=r)


def cmd_nishida(args) -> dict:
    x = _elem(args.elem, "bmu")
    rep = O.co_nishida_check(x, t_window=args.window, cap=args.cap, mode=args.mode)
    status = "ok" if rep.passed else "fail"
    payload = {"input": O.render_bmu(x), "window": args.window, "cap": args.cap, "mode": args.mode,
               "passed": rep.passed, "checked": rep.checked}
    text = f"{'pass' if rep.passed else 'FAIL'} ({rep.checked} coefficients)"
    return _report("nishida", status, payload, None if rep.passed else rep.witness(), text=text)


def cmd_action_derive(args) -> dict:
    y = O.derive_action_on_tau(args.k, args.cap)
    r = D.render(y)
    return _report("action-derive", "ok", {"k": args.k, "result": r}, text=r)


def cmd_diagonal(args) -> dict:
    g = O.OpsGen(*_ops_gen(args.gen))
    terms = sorted(O.ops_diagonal(g, args.window), key=lambda p: (p[0].s, p[0].sigma, p[1].s, p[1].sigma))
    out = [[O.render_ops_gen(x), O.render_ops_gen(y)] for x, y in terms]
    text = " + ".join(f"{x} (x) {y}" for x, y in out) or "0"
    return _report("diagonal", "ok", {"input": O.render_ops_gen(g), "window": args.window, "terms": out},
                   text=text)


def _ascii_chart(chart: K.ExtChart, nmax: int) -> str:
    """Rows s (top down), columns n on the stem n*rho; '.' marks zero."""
    rows = []
    width = 3
    header = "s/n " + "".join(f"{n:>{width}}" for n in range(nmax + 1))
    for s in range(chart.smax, -1, -1):
        cells = []
        for n in range(nmax + 1):
            d = chart.dim(s, (n + s, n))
            cells.append(f"{d if d else '.':>{width}}")
        rows.append(f"{s:>3} " + "".join(cells))
    zero_line = all(chart.dim(s, (n - 1 + s, n)) == 0 for s in range(chart.smax + 1) for n in range(nmax + 1))
    rows.append(header)
    rows.append(f"n*rho - 1 line: {'all zero' if zero_line else 'NONZERO'}")
    return "\n".join(rows)


def cmd_ext(args) -> dict:
    if args.module == "pstar" and args.hopf != "astar-trunc":
        raise UsageError("the comodule pstar needs --hopf astar-trunc")
    chart = K.ext_window(args.hopf, args.module, args.smax, args.nmax, budget=args.budget, seed=args.seed,
                         keep_zero=not args.nonzero)
    payload = {"hopf": args.hopf, "module": args.module, "smax": args.smax, "nmax": args.nmax,
               "chart": chart.to_json()}
    return _report("ext", "ok", payload, text=_ascii_chart(chart, args.nmax))


def cmd_cotor(args) -> dict:
    chart = K.cotor_e_tau0(args.smax, args.bound)
    bad = K.compare_cotor(chart, corrected=args.corrected)
    payload = {"smax": args.smax, "bound": args.bound, "corrected": args.corrected,
               "chart": [e for e in chart.to_json() if e["dim"]], "mismatches": bad}
    witness = None
    if bad:
        b = bad[0]
        witness = (f"{len(bad)} mismatches; first at s={b['s']}, degree ({b['degree']['a']},{b['degree']['b']}): "
                   f"computed {b['computed']}, closed form {b['closed_form']}")
    text = "matches closed form" if not bad else witness
    return _report("cotor", "fail" if bad else "ok", payload, witness, text=text)


def cmd_selftest(args) -> dict:
    from .checks import run_selftest

    results = run_selftest(slow=args.slow, seed=args.seed, budget=args.budget)
    failed = [r for r in results if r["status"] != "ok"]
    status = "ok"
    if any(r["status"] == "fail" for r in results):
        status = "fail"
    elif failed:
        status = "undetermined"
    text = "\n".join(f"{r['status']:>12}  {r['name']}" + (f"  ({r['witness']})" if r["witness"] else "")
                     for r in results)
    return _report("selftest", status, {"checks": results}, failed[0]["witness"] if failed else None, text=text)


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="c2steenrod", description="C2-equivariant dual Steenrod algebra calculator")
    p.add_argument("--format", choices=("text", "ascii", "json"), default="text")
    p.add_argument("--budget", type=int, default=None,
                   help="cap on cobar matrix sizes (default: $C2STEENROD_BUDGET or %d)" % K.DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=None, help="seed for shuffled or randomized runs")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("conjugate", help="conjugates xibar_i, taubar_i, or chi on an element")
    c.add_argument("--gen", choices=("xi", "tau"))
    c.add_argument("--index", type=int)
    c.add_argument("--elem")
    c.set_defaults(func=cmd_conjugate)

    c = sub.add_parser("coeff", help="coefficient of t^index in a series power")
    c.add_argument("--series", default="xi", help="xi, tau, xibar, taubar or a series expression")
    c.add_argument("--power", type=int, default=1)
    c.add_argument("--times-tau", default=None, help="multiply by this series after taking the power")
    c.add_argument("--index", type=int, required=True)
    c.add_argument("--ceiling", type=int, default=32)
    c.set_defaults(func=cmd_coeff)

    c = sub.add_parser("compose", help="f(g(t))")
    c.add_argument("--f", required=True)
    c.add_argument("--g", required=True)
    c.add_argument("--ceiling", type=int, default=32)
    c.set_defaults(func=cmd_compose)

    c = sub.add_parser("normal-form", help="parse and print canonically")
    c.add_argument("--elem", required=True)
    c.add_argument("--kind", choices=("point", "dual", "bmu", "series"))
    c.set_defaults(func=cmd_normal_form)

    c = sub.add_parser("psi", help="coproduct")
    c.add_argument("--elem", required=True)
    c.set_defaults(func=cmd_psi)

    c = sub.add_parser("etar", help="right unit on a coefficient")
    c.add_argument("--elem", required=True)
    c.add_argument("--ceiling", type=int, default=32)
    c.set_defaults(func=cmd_etar)

    c = sub.add_parser("bockstein", help="Bockstein on A or on H(Bmu2)")
    c.add_argument("--elem", required=True)
    c.set_defaults(func=cmd_bockstein)

    c = sub.add_parser("coaction", help="coaction on H(Bmu2), or on an Ops generator")
    c.add_argument("--elem", default="c")
    c.add_argument("--cap", type=int, default=12, help="weight cap on H(Bmu2)")
    c.add_argument("--ops", default=None, help="an Ops generator such as 2rho or -rho+sigma")
    c.add_argument("--rmin", type=int, default=-8)
    c.set_defaults(func=cmd_coaction)

    c = sub.add_parser("qop", help="a power operation on A or H(Bmu2)")
    c.add_argument("--op", required=True)
    c.add_argument("--elem", required=True)
    c.add_argument("--mode", choices=("table", "derived", "laws"), default="table")
    c.set_defaults(func=cmd_qop)

    c = sub.add_parser("nishida", help="check the co-Nishida relation on H(Bmu2)")
    c.add_argument("--elem", required=True)
    c.add_argument("--window", type=int, default=3, help="|r| window on powers of t")
    c.add_argument("--cap", type=int, default=12)
    c.add_argument("--mode", choices=("table", "derived", "laws"), default="derived")
    c.set_defaults(func=cmd_nishida)

    c = sub.add_parser("action-derive", help="derive Q on tau_k from the co-Nishida relation")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--cap", type=int, default=None)
    c.set_defaults(func=cmd_action_derive)

    c = sub.add_parser("diagonal", help="diagonal of an Ops generator")
    c.add_argument("--gen", required=True)
    c.add_argument("--window", type=int, default=2)
    c.set_defaults(func=cmd_diagonal)

    c = sub.add_parser("ext", help="Ext chart from the cobar complex")
    c.add_argument("--hopf", choices=("lambda", "etau0", "astar-trunc"), default="lambda")
    c.add_argument("--module", choices=("hf", "pstar"), default="hf")
    c.add_argument("--smax", type=int, default=6)
    c.add_argument("--nmax", type=int, default=6)
    c.add_argument("--nonzero", action="store_true", help="omit zero entries from json")
    c.set_defaults(func=cmd_ext)

    c = sub.add_parser("cotor", help="Cotor over E(tau0) against the closed form")
    c.add_argument("--smax", type=int, default=6)
    c.add_argument("--bound", type=int, default=6)
    c.add_argument("--corrected", action="store_true", help="compare with the form including th/u^(2m)")
    c.set_defaults(func=cmd_cotor)

    c = sub.add_parser("selftest", help="fast consistency checks")
    c.add_argument("--slow", action="store_true", help="include the change-of-rings comparison")
    c.set_defaults(func=cmd_selftest)
    return p


def execute(argv: List[str]) -> tuple:
    """Run one command; returns (report, exit code, rendered output)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else USAGE
        rep = _report("", "ok" if code == 0 else "usage", None, None if code == 0 else "invalid arguments")
        rep.pop("_text")
        return rep, code, ""
    try:
        rep = args.func(args)
    except UsageError as exc:
        rep = _report(args.command, "usage", None, str(exc))
    except (O.UndeterminedOperation, K.BudgetExceeded, D.NegativeConeError,
            D.EtaTruncationError, S.TruncationError, O.WindowError, K.WindowExhausted) as exc:
        rep = _report(args.command, "undetermined", None, f"{type(exc).__name__}: {exc}")
    except ValueError as exc:
        rep = _report(args.command, "usage", None, str(exc))
    code = EXIT.get(rep["status"], USAGE)
    text = rep.pop("_text", None)
    if args.format == "json":
        out = json.dumps(rep, sort_keys=True, indent=2, ensure_ascii=True)
    else:
        lines = []
        if rep["status"] == "ok":
            lines.append(text if text is not None else json.dumps(rep["payload"], sort_keys=True))
        else:
            if text is not None and rep["status"] == "fail" and text != rep["witness"]:
                lines.append(text)
            lines.append(f"{rep['status']}: {rep['witness']}")
        out = "\n".join(lines)
    return rep, code, out


def main(argv: Optional[List[str]] = None) -> int:
    _rep, code, out = execute(sys.argv[1:] if argv is None else argv)
    if out:
        print(out, file=sys.stdout if code in (0, 1, 2) else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
