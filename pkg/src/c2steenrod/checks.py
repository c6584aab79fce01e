"""Windowed verification routines, one per headline identity.

Each returns a Check; the window arguments scale them from a quick selftest
to the full acceptance runs.
"""

from __future__ import annotations

import itertools
import json
import shlex
from importlib import resources
from typing import Callable, List, NamedTuple, Optional

from . import cobar as K
from . import dual as D
from . import ops as O
from . import series as S
from .point import (
    Neg, Pos, PointElem, TateClass, UnderlyingElem, classes_in_box, degree_of,
    mul_class, render_class, restriction, tate_boundary, transfer,
)


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str
    checked: int = 0


def _fail(name, detail, n=0):
    return Check(name, False, detail, n)


# ---------------------------------------------------------------- series


def conjugation_identities(ceiling: int = 64) -> Check:
    name = "conjugation identities"
    c = ceiling + 2
    xi, xib = S.xi_series(c), S.xibar_series(c)
    tau, taub = S.tau_series(c), S.taubar_series(c)
    t = S.LaurentSeries.t()
    pairs = [("xi(xibar(t)) = t", S.compose(xi, xib), t), ("xibar(xi(t)) = t", S.compose(xib, xi), t),
             ("tau(xibar(t)) = taubar(t)", S.compose(tau, xib), taub),
             ("taubar(xi(t)) = tau(t)", S.compose(taub, xi), tau)]
    for label, lhs, rhs in pairs:
        if not lhs.agrees_with(rhs, ceiling):
            return _fail(name, f"{label} fails mod t^{ceiling}")
    return Check(name, True, f"4 identities mod t^{ceiling}", 4)


def residue_identities(bound: int = 8) -> Check:
    name = "residue identities"
    ceiling = 4 * bound + 8
    xi, xib = S.xi_series(ceiling), S.xibar_series(ceiling)
    tau, taub = S.tau_series(ceiling), S.taubar_series(ceiling)
    n = 0
    for r in range(-bound, bound + 1):
        xr = S.power(xi, r)
        txr = S.mul(tau, xr)
        for s in range(-bound, bound + 1):
            xbs = S.power(xib, -s - 1)
            if S.coeff(xbs, -r - 1) != S.coeff(xr, s):
                return _fail(name, f"first identity fails at r={r}, s={s}", n)
            if S.coeff(S.mul(taub, xbs), -r - 1) != S.coeff(txr, s):
                return _fail(name, f"second identity fails at r={r}, s={s}", n)
            n += 2
    return Check(name, True, f"|r|, |s| <= {bound}", n)


# ---------------------------------------------------------------- coefficient ring


def coefficient_ring_suite(bound: int = 6) -> Check:
    name = "coefficient ring"
    cls = classes_in_box(bound)
    n = 0
    for x in cls:
        for y in cls:
            xy, yx = mul_class(x, y), mul_class(y, x)
            n += 1
            if xy != yx:
                return _fail(name, f"{render_class(x)}*{render_class(y)} not commutative", n)
            if xy is not None and degree_of(xy) != degree_of(x) + degree_of(y):
                return _fail(name, f"degree of {render_class(x)}*{render_class(y)}", n)
    for x, y, z in itertools.product(cls, repeat=3):
        xy = mul_class(x, y)
        yz = mul_class(y, z)
        left = None if xy is None else mul_class(xy, z)
        right = None if yz is None else mul_class(x, yz)
        n += 1
        if left != right:
            return _fail(name, f"associativity on {render_class(x)}, {render_class(y)}, {render_class(z)}", n)
    for x in cls:
        px = PointElem.of(x)
        for m in range(-bound - 2, bound + 1):
            y = UnderlyingElem([m])
            n += 1
            if transfer(restriction(px) * y) != px * transfer(y):
                return _fail(name, f"Frobenius reciprocity at {render_class(x)}, r^{m}", n)
            if restriction(transfer(y)):
                return _fail(name, f"res(tr(r^{m})) != 0", n)
    for x in cls:
        for y in cls:
            n += 1
            if restriction(PointElem.of(x) * PointElem.of(y)) != restriction(PointElem.of(x)) * restriction(PointElem.of(y)):
                return _fail(name, f"res not multiplicative at {render_class(x)}, {render_class(y)}", n)
    for i in range(-bound, bound + 1):
        for j in range(-bound, bound + 1):
            z = TateClass(i, j)
            for p, shift in ((Pos(1, 0), TateClass(1, 0)), (Pos(0, 1), TateClass(0, 1))):
                n += 1
                if PointElem.of(p) * tate_boundary(z) != tate_boundary(z * shift):
                    return _fail(name, f"boundary not linear at u^{i} a^{j}", n)
    return Check(name, True, f"exhaustive for |a|, |b| <= {bound}", n)


# ---------------------------------------------------------------- Hopf algebroid


def hopf_suite(top: int = 4) -> Check:
    name = "Hopf algebroid"
    gens = [("xi%d" % i, D.XI(i)) for i in range(1, top + 1)] + [("tau%d" % i, D.TAU(i)) for i in range(top + 1)]
    n = 0
    for label, g in gens:
        p = D.psi(g)
        n += 1
        if D.psi_tensor_factor(p, 0) != D.psi_tensor_factor(p, 1):
            return _fail(name, f"coassociativity on {label}", n)
        if D.collapse_left(p) != g or D.collapse_right(p) != g:
            return _fail(name, f"counit on {label}", n)
        if D.conjugate(D.conjugate(g)) != g:
            return _fail(name, f"chi^2 on {label}", n)
    small = [c for c in classes_in_box(4) if type(c) is Pos]
    for x in small:
        for y in small:
            n += 1
            if D.eta_R_class(Pos(x.i + y.i, x.j + y.j)) != D.eta_R_class(x) * D.eta_R_class(y):
                return _fail(name, f"eta_R multiplicative on {render_class(x)}, {render_class(y)}", n)
    for i in range(3):
        for j in range(3):
            for k in range(5):
                for m in range(5):
                    prod = mul_class(Pos(i, j), Neg(k, m))
                    lhs = D.ZERO if prod is None else D.eta_R_class(prod)
                    n += 1
                    if lhs != D.eta_R_class(Pos(i, j)) * D.eta_R_class(Neg(k, m)):
                        return _fail(name, f"eta_R multiplicative on u^{i}a^{j} * th/(a^{k}u^{m})", n)
    basics = [D.U, D.A] + [g for _l, g in gens]
    for x in basics:
        for y in basics:
            n += 1
            if D.bockstein(x * y) != D.bockstein(x) * y + x * D.bockstein(y):
                return _fail(name, f"beta derivation on {D.render(x)}, {D.render(y)}", n)
            if D.bockstein(D.bockstein(x * y)):
                return _fail(name, f"beta^2 on {D.render(x * y)}", n)
    for x in small:
        px = D.coeff_elem(x)
        n += 1
        if D.bockstein(D.eta_R_class(x)) != D.eta_R_elem(D.bockstein(px)):
            return _fail(name, f"beta eta_R on {render_class(x)}", n)
    return Check(name, True, f"generators through index {top}", n)


def eta_leading_terms(bound: int = 3) -> Check:
    name = "eta_R leading terms"
    n = 0
    for k in range(bound + 1):
        for m in range(bound + 1):
            full = D.eta_R(PointElem.of(Neg(k, m)), ceiling=k + 1)
            low = {(t.coeff, t.tau) for t in full.terms if not t.xi and t.tau in (0, 1)}
            want = {(Neg(k, m), 0)}
            if (m + 1) % 2 == 1 and k >= 1:
                want.add((Neg(k - 1, m + 1), 1))
            n += 1
            if low != want:
                return _fail(name, f"th/(a^{k} u^{m}): got {sorted(map(str, low))}", n)
    return Check(name, True, f"k, n <= {bound}", n)


# ---------------------------------------------------------------- operations


def action_derivation(kmax: int = 3) -> Check:
    name = "action on tau_k"
    for k in range(kmax + 1):
        want = D.TAU(k + 1) + D.TAU(0) * D.XI(k + 1)
        got = O.derive_action_on_tau(k)
        if got != want:
            return _fail(name, f"k={k}: derived {D.render(got)}", k)
        table = O.q_on_dual_steenrod(O.QSymbol(1 << k), D.TAU(k), mode="table")
        if table != got:
            return _fail(name, f"k={k}: table gives {D.render(table)}", k)
    return Check(name, True, f"k <= {kmax}", kmax + 1)


def nishida_suite(window: int = 3, cap: int = 12) -> Check:
    name = "co-Nishida relations"
    n = 0
    for label, x in (("1", O.BMU_ONE), ("b", O.B), ("b^2", O.B * O.B), ("c", O.C), ("c*b", O.C * O.B)):
        rep = O.co_nishida_check(x, t_window=window, cap=cap)
        n += rep.checked
        if not rep.passed:
            return _fail(name, f"{label}: {rep.witness()}", n)
    return Check(name, True, f"|r| <= {window}, weight <= {cap}", n)


def ops_coassociativity_suite(bound: int = 4, r_min: int = -8) -> Check:
    name = "Ops coaction coassociativity"
    n = 0
    for s in range(-bound, bound + 1):
        for sigma in (False, True):
            ok, wit = O.ops_coassociativity(O.OpsGen(s, sigma), r_min)
            n += 1
            if not ok:
                return _fail(name, f"{O.render_ops_gen(O.OpsGen(s, sigma))} at target {O.render_ops_gen(wit[0])}", n)
    return Check(name, True, f"|s| <= {bound}, targets >= {r_min}", n)


# ---------------------------------------------------------------- Ext


def ext_lambda(smax: int = 6, nmax: int = 6, oracle: Optional[Callable[[int, int], int]] = None,
               budget: Optional[int] = None) -> Check:
    name = "Ext over Lambda"
    oracle = oracle or K.v_monomial_count
    chart = K.ext_window("lambda", "hf", smax, nmax, budget=budget)
    n = 0
    for s in range(smax + 1):
        for m in range(nmax + 1):
            n += 2
            d = chart.dim(s, (m - 1 + s, m))
            if d:
                return _fail(name, f"dimension {d} at s={s} on stem {m}rho-1", n)
            d = chart.dim(s, (m + s, m))
            want = oracle(s, m)
            if d != want:
                return _fail(name, f"dimension {d} at s={s} on stem {m}rho, expected {want}", n)
    return Check(name, True, f"s <= {smax}, n <= {nmax}", n)


def cotor_closed_form(smax: int = 6, bound: int = 6, corrected: bool = False) -> Check:
    name = "Cotor over E(tau0)" + (" (with th/u^2m)" if corrected else "")
    chart = K.cotor_e_tau0(smax, bound)
    bad = K.compare_cotor(chart, corrected)
    if bad:
        b = bad[0]
        spots = ", ".join(f"s={x['s']} ({x['degree']['a']},{x['degree']['b']})" for x in bad[:4])
        return _fail(name, f"{len(bad)} mismatches, e.g. {spots}; first: computed {b['computed']}, "
                           f"closed form {b['closed_form']}", len(chart.entries))
    return Check(name, True, f"s <= {smax}, |a|, |b| <= {bound}", len(chart.entries))


def change_of_rings(smax: int = 2, total: int = 6, budget: Optional[int] = None) -> Check:
    name = "change of rings"
    rep = K.change_of_rings_check(smax, total, budget)
    if rep.budget_hit:
        return _fail(name, f"budget exceeded: {rep.budget_hit}", rep.checked)
    if not rep.passed:
        return _fail(name, f"first mismatch {rep.mismatches[0]}", rep.checked)
    return Check(name, True, f"s <= {smax}, |a| + |b| <= {total}", rep.checked)


# ---------------------------------------------------------------- CLI corpus


def load_corpus() -> List[tuple]:
    """(expected exit code, argv) pairs from the packaged example corpus."""
    text = resources.files("c2steenrod").joinpath("data/cli_corpus.txt").read_text()
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        code, _, cmd = line.partition("|")
        out.append((int(code), shlex.split(cmd)))
    return out


def cli_corpus() -> Check:
    from .cli import execute
    from .parse import kind_of, parse_expression, render_expression

    name = "CLI corpus"
    n = 0
    for code, argv in load_corpus():
        rep1, c1, out1 = execute(["--format", "json"] + argv)
        rep2, c2, out2 = execute(["--format", "json"] + argv)
        n += 1
        if out1 != out2 or c1 != c2:
            return _fail(name, f"not byte-deterministic: {' '.join(argv)}", n)
        if c1 != code:
            return _fail(name, f"exit {c1}, expected {code}: {' '.join(argv)}", n)
        json.loads(out1)
        if "--elem" in argv and c1 != 3:
            text = argv[argv.index("--elem") + 1]
            x = parse_expression(text)
            if parse_expression(render_expression(x), kind_of(x)) != x:
                return _fail(name, f"round trip fails on {text!r}", n)
    return Check(name, True, "exit codes, determinism and round trips", n)


QUICK = [
    lambda: conjugation_identities(16),
    lambda: residue_identities(3),
    lambda: coefficient_ring_suite(3),
    lambda: hopf_suite(2),
    lambda: eta_leading_terms(3),
    lambda: action_derivation(1),
    lambda: nishida_suite(2, 8),
    lambda: ext_lambda(3, 3),
    lambda: cotor_closed_form(3, 4, corrected=True),
    lambda: ops_coassociativity_suite(2),
]


def run_selftest(slow: bool = False, seed: Optional[int] = None, budget: Optional[int] = None) -> List[dict]:
    """Quick windows of every check; slow adds the change-of-rings comparison."""
    runs = list(QUICK)
    if slow:
        runs.append(lambda: change_of_rings(1, 4, budget))
    out = []
    for f in runs:
        try:
            c = f()
            out.append({"name": c.name, "status": "ok" if c.passed else "fail",
                        "witness": None if c.passed else c.detail, "checked": c.checked})
        except (K.BudgetExceeded, O.UndeterminedOperation) as exc:
            out.append({"name": getattr(f, "__name__", "check"), "status": "undetermined",
                        "witness": str(exc), "checked": 0})
    return out


__all__ = [
    "Check", "conjugation_identities", "residue_identities", "coefficient_ring_suite", "hopf_suite",
    "eta_leading_terms", "action_derivation", "nishida_suite", "ops_coassociativity_suite", "ext_lambda",
    "cotor_closed_form", "change_of_rings", "load_corpus", "cli_corpus", "QUICK", "run_selftest",
]
