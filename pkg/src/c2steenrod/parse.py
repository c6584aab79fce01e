"""Text grammar for elements, shared by the CLI and the tests.

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := atom ('^' int)? | 'th' '/' denom | '(' expr ')' ('^' int)? | 'O' '(' 't' '^' int ')'
    denom  := atom ('^' int)? | '(' atom ('^' int)? ('*' atom ('^' int)?)* ')'

Atoms are 0, 1, u, a, th, ubar, xi<i>, tau<i>, b, c and t.  The kind of the
result (point, dual, bmu or series) is read off the symbols that occur, or
forced by the caller.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from . import dual as D
from . import series as S
from .ops import C, BmuElem
from .point import Neg, Pos, PointElem, UNIT, mul_class

KINDS = ("point", "dual", "bmu", "series")


class ParseError(ValueError):
    """Syntax error; pos is the offset into the text."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+\d*)|(.))")
_NAMED = re.compile(r"^(xi|tau)(\d+)$")


def _tokens(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if m.group(1):
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+*^/()-":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


# A raw monomial is (coefficient class, sorted tuple of (symbol, exponent)).
# Raw sums are F2 sets of raw monomials; O(t^N) is tracked separately.


def _key(exps: Dict[str, int]) -> tuple:
    return tuple(sorted((k, v) for k, v in exps.items() if v))


def _mono_mul(x, y):
    c = mul_class(x[0], y[0])
    if c is None:
        return None
    exps = dict(x[1])
    for k, v in y[1]:
        exps[k] = exps.get(k, 0) + v
    return (c, _key(exps))


class _Raw:
    __slots__ = ("terms", "ceiling")

    def __init__(self, terms=(), ceiling: Optional[int] = None):
        acc: set = set()
        for t in terms:
            acc ^= {t}
        self.terms = frozenset(acc)
        self.ceiling = ceiling

    def __add__(self, other):
        c = [x for x in (self.ceiling, other.ceiling) if x is not None]
        return _Raw(self.terms ^ other.terms, min(c) if c else None)

    def __mul__(self, other):
        acc: set = set()
        for x in self.terms:
            for y in other.terms:
                z = _mono_mul(x, y)
                if z is not None:
                    acc ^= {z}
        if self.ceiling is not None or other.ceiling is not None:
            raise ParseError("O(t^N) cannot be multiplied", 0)
        return _Raw(acc)


def _atom_raw(name: str, exp: int, pos: int) -> _Raw:
    if name == "u" or name == "a":
        if exp < 0:
            raise ParseError(f"negative power of {name} needs th/", pos)
        return _Raw([(Pos(exp, 0) if name == "u" else Pos(0, exp), ())])
    if name == "th":
        if exp != 1:
            raise ParseError("th squares to zero; powers are not allowed", pos)
        return _Raw([(Neg(0, 0), ())])
    if name in ("b", "t"):
        return _Raw([(UNIT, ((name, exp),) if exp else ())])
    if name in ("c", "ubar") or _NAMED.match(name):
        if exp < 0:
            raise ParseError(f"negative power of {name}", pos)
        return _Raw([(UNIT, ((name, exp),) if exp else ())])
    raise ParseError(f"unknown symbol {name!r}", pos)


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> _Raw:
        r = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return r

    def expr(self) -> _Raw:
        r = self.term()
        while self.peek()[1] == "+" and self.peek()[0] == "op":
            self.take()
            r = r + self.term()
        return r

    def term(self) -> _Raw:
        r = self.factor()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            r = r * self.factor()
        return r

    def exponent(self) -> int:
        if self.peek()[1] != "^":
            return 1
        self.take()
        neg = False
        if self.peek()[1] == "-":
            self.take()
            neg = True
        v = int(self.take("int")[1])
        return -v if neg else v

    def factor(self) -> _Raw:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            if tok[1] not in ("0", "1"):
                raise ParseError("only the integers 0 and 1 exist mod 2 as scalars", tok[2])
            return _Raw([(UNIT, ())]) if tok[1] == "1" else _Raw()
        if tok[1] == "(":
            self.take()
            r = self.expr()
            self.take("op", ")")
            e = self.exponent()
            if e < 0:
                raise ParseError("negative power of a sum", tok[2])
            out = _Raw([(UNIT, ())])
            for _ in range(e):
                out = out * r
            return out
        if tok[0] != "name":
            raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2])
        self.take()
        name = tok[1]
        if name == "O":
            self.take("op", "(")
            t = self.take("name")
            if t[1] != "t":
                raise ParseError("O(...) takes a power of t", t[2])
            n = self.exponent()
            self.take("op", ")")
            return _Raw((), n)
        if name == "th" and self.peek()[1] == "/":
            self.take()
            k, n = self.denom()
            return _Raw([(Neg(k, n), ())])
        return _atom_raw(name, self.exponent(), tok[2])

    def denom(self) -> Tuple[int, int]:
        k = n = 0
        paren = self.peek()[1] == "("
        if paren:
            self.take()
        while True:
            t = self.take("name")
            e = self.exponent()
            if e < 0:
                raise ParseError("negative power in a denominator", t[2])
            if t[1] == "a":
                k += e
            elif t[1] == "u":
                n += e
            else:
                raise ParseError("th may only be divided by a and u", t[2])
            if not paren or self.peek()[1] != "*":
                break
            self.take()
        if paren:
            self.take("op", ")")
        return k, n


def _symbols(raw: _Raw) -> set:
    return {k for _c, ex in raw.terms for k, _v in ex}


def infer_kind(raw: _Raw) -> str:
    syms = _symbols(raw)
    if "t" in syms or raw.ceiling is not None:
        return "series"
    if syms & {"b", "c"}:
        return "bmu"
    if syms:
        return "dual"
    return "point"


def _named_exps(ex, prefix: str) -> Tuple[int, ...]:
    out: Dict[int, int] = {}
    for k, v in ex:
        m = _NAMED.match(k)
        if m and m.group(1) == prefix:
            out[int(m.group(2))] = v
    if not out:
        return ()
    start = 1 if prefix == "xi" else 0
    if min(out) < start:
        raise ParseError(f"{prefix}{min(out)} does not exist", 0)
    return tuple(out.get(i, 0) for i in range(start, max(out) + 1))


def _to_point(raw: _Raw) -> PointElem:
    return PointElem(c for c, ex in raw.terms)


def _to_dual(raw: _Raw) -> D.ASElem:
    bad = _symbols(raw) - {"ubar"} - {k for k in _symbols(raw) if _NAMED.match(k)}
    if bad:
        raise ParseError(f"symbols {sorted(bad)} do not belong to A", 0)
    raw_terms = []
    for c, ex in raw.terms:
        ub = dict(ex).get("ubar", 0)
        raw_terms.append((c, _named_exps(ex, "xi"), _named_exps(ex, "tau"), ub))
    return D.normalize(raw_terms)


def _to_bmu(raw: _Raw) -> BmuElem:
    bad = _symbols(raw) - {"b", "c"}
    if bad:
        raise ParseError(f"symbols {sorted(bad)} do not belong to H(Bmu2)", 0)
    out = BmuElem()
    for c, ex in raw.terms:
        d = dict(ex)
        x = BmuElem([(c, 0, d.get("b", 0))])
        for _ in range(d.get("c", 0)):
            x = x * C
        out = out + x
    return out


def _to_series(raw: _Raw) -> S.LaurentSeries:
    bad = {k for k in _symbols(raw) if k != "t" and not _NAMED.match(k)}
    if bad:
        raise ParseError(f"symbols {sorted(bad)} cannot appear in a series", 0)
    coeffs: Dict[int, frozenset] = {}
    for c, ex in raw.terms:
        if c != UNIT:
            raise ParseError("series coefficients are polynomials in xi_i, tau_i only", 0)
        d = dict(ex)
        mono = (D._strip(_named_exps(ex, "xi")), D._strip(_named_exps(ex, "tau")))
        s = d.get("t", 0)
        coeffs[s] = coeffs.get(s, S.ZERO) ^ frozenset([mono])
    ceiling = S.EXACT if raw.ceiling is None else raw.ceiling
    return S.LaurentSeries(coeffs, ceiling)


def parse_raw(text: str) -> _Raw:
    return _Parser(text).parse()


def parse_expression(text: str, kind: Optional[str] = None):
    """Parse into a PointElem, ASElem, BmuElem or LaurentSeries."""
    raw = parse_raw(text)
    k = kind or infer_kind(raw)
    if k not in KINDS:
        raise ValueError(f"unknown kind {k!r}")
    if k != "series" and raw.ceiling is not None:
        raise ParseError("O(t^N) only makes sense in a series", 0)
    if k == "point":
        if _symbols(raw):
            raise ParseError(f"symbols {sorted(_symbols(raw))} are not in the coefficient ring", 0)
        return _to_point(raw)
    if k == "dual":
        return _to_dual(raw)
    if k == "bmu":
        return _to_bmu(raw)
    return _to_series(raw)


def kind_of(x) -> str:
    if isinstance(x, PointElem):
        return "point"
    if isinstance(x, D.ASElem):
        return "dual"
    if isinstance(x, BmuElem):
        return "bmu"
    if isinstance(x, S.LaurentSeries):
        return "series"
    raise TypeError(f"no grammar for {type(x).__name__}")


def render_expression(x) -> str:
    from .ops import render_bmu
    from .point import render_point

    k = kind_of(x)
    if k == "point":
        return render_point(x)
    if k == "dual":
        return D.render(x)
    if k == "bmu":
        return render_bmu(x)
    return S.render_series(x)


__all__ = ["ParseError", "parse_expression", "render_expression", "infer_kind", "kind_of", "KINDS"]
