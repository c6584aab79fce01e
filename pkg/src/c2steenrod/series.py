"""Truncated Laurent series in t over the free F2 polynomial ring on xi_i, tau_i.

A polynomial is a frozenset of monomials; a monomial is a pair (xi, tau) of
exponent tuples with trailing zeros stripped.  xi[i-1] is the exponent of
xi_i and tau[i] the exponent of tau_i.  No tau relations are imposed here.

Every series carries an explicit ceiling: coefficients at exponents >= ceiling
are unknown, and asking for them raises TruncationError.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Tuple

from .point import Degree

Mono = Tuple[Tuple[int, ...], Tuple[int, ...]]
Poly = frozenset

EXACT = 10 ** 9  # ceiling of a series known exactly

ONE_MONO: Mono = ((), ())
ONE: Poly = frozenset([ONE_MONO])
ZERO: Poly = frozenset()


class TruncationError(ValueError):
    """A coefficient at or above the ceiling was requested."""


# ---------------------------------------------------------------- polynomials


def _addt(x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
    if len(x) < len(y):
        x, y = y, x
    return tuple(p + q for p, q in zip(x, y)) + x[len(y):]


def mono_mul(m1: Mono, m2: Mono) -> Mono:
    return (_addt(m1[0], m2[0]), _addt(m1[1], m2[1]))


def xi(i: int, e: int = 1) -> Poly:
    if i == 0:
        return ONE
    return frozenset([(tuple([0] * (i - 1) + [e]), ())])


def tau(i: int, e: int = 1) -> Poly:
    return frozenset([((), tuple([0] * i + [e]))])


def padd(*ps: Poly) -> Poly:
    out: frozenset = frozenset()
    for p in ps:
        out = out ^ p
    return out


def pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    if p is ONE:
        return q
    if q is ONE:
        return p
    acc: set = set()
    for m1 in p:
        for m2 in q:
            m = mono_mul(m1, m2)
            if m in acc:
                acc.remove(m)
            else:
                acc.add(m)
    return frozenset(acc)


def psquare(p: Poly) -> Poly:
    # Frobenius: cross terms cancel in characteristic two
    return frozenset((tuple(2 * e for e in m[0]), tuple(2 * e for e in m[1])) for m in p)


def ppow(p: Poly, n: int) -> Poly:
    if n < 0:
        raise ValueError("negative power of a polynomial")
    out = ONE
    base = p
    while n:
        if n & 1:
            out = pmul(out, base)
        n >>= 1
        if n:
            base = psquare(base)
    return out


def mono_degree(m: Mono) -> Degree:
    r = 0
    for i, e in enumerate(m[0], start=1):
        r += e * ((1 << i) - 1)
    ones = 0
    for i, e in enumerate(m[1]):
        r += e * ((1 << i) - 1)
        ones += e
    return Degree(r + ones, r)


def poly_degrees(p: Poly) -> set:
    return {mono_degree(m) for m in p}


def _rev_key(t: Tuple[int, ...], width: int) -> Tuple[int, ...]:
    padded = t + (0,) * (width - len(t))
    return tuple(-e for e in reversed(padded))


def mono_key(m: Mono):
    d = mono_degree(m)
    w = max(16, len(m[0]), len(m[1]))
    return (d.a + d.b, d.a, _rev_key(m[1], w), _rev_key(m[0], w))


def render_mono(m: Mono) -> str:
    parts = []
    for i, e in enumerate(m[1]):
        if e:
            parts.append(f"tau{i}" if e == 1 else f"tau{i}^{e}")
    for i, e in enumerate(m[0], start=1):
        if e:
            parts.append(f"xi{i}" if e == 1 else f"xi{i}^{e}")
    return "*".join(parts) if parts else "1"


def render_poly(p: Poly) -> str:
    if not p:
        return "0"
    return " + ".join(render_mono(m) for m in sorted(p, key=mono_key))


# ---------------------------------------------------------------- conjugates


@lru_cache(maxsize=None)
def conjugate_xi(i: int) -> Poly:
    """xi-bar_i via xi-bar_i = sum_{j<i} xi_{i-j}^{2^j} xi-bar_j, xi-bar_0 = 1."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    if i == 0:
        return ONE
    acc = ZERO
    for j in range(i):
        acc = acc ^ pmul(xi(i - j, 1 << j), conjugate_xi(j))
    return acc


@lru_cache(maxsize=None)
def conjugate_tau(i: int) -> Poly:
    """tau-bar_i via tau-bar_i = tau_i + sum_{j<i} xi_{i-j}^{2^j} tau-bar_j."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    acc = tau(i)
    for j in range(i):
        acc = acc ^ pmul(xi(i - j, 1 << j), conjugate_tau(j))
    return acc


# ---------------------------------------------------------------- series


class LaurentSeries:
    """sum_s coeffs[s] t^s, known for s < ceiling; lo bounds the valuation from below."""

    __slots__ = ("lo", "ceiling", "coeffs")

    def __init__(self, coeffs: Dict[int, Poly], ceiling: int, lo: int | None = None):
        if ceiling > EXACT // 2:
            ceiling = EXACT
        clean = {s: p for s, p in coeffs.items() if p and s < ceiling}
        if lo is None:
            lo = min(clean) if clean else min(ceiling, 0)
        if clean and min(clean) < lo:
            raise ValueError("coefficient below declared lo")
        self.lo = lo
        self.ceiling = ceiling
        self.coeffs = clean

    # construction helpers
    @classmethod
    def monomial(cls, s: int, p: Poly = ONE, ceiling: int = EXACT) -> "LaurentSeries":
        return cls({s: p}, ceiling)

    @classmethod
    def t(cls) -> "LaurentSeries":
        return cls({1: ONE}, EXACT)

    @classmethod
    def one(cls) -> "LaurentSeries":
        return cls({0: ONE}, EXACT)

    def valuation(self) -> int:
        return min(self.coeffs) if self.coeffs else self.ceiling

    def coeff(self, s: int) -> Poly:
        if s >= self.ceiling:
            raise TruncationError(f"coefficient of t^{s} requested but series is only known below t^{self.ceiling}")
        return self.coeffs.get(s, ZERO)

    def truncate(self, ceiling: int) -> "LaurentSeries":
        if ceiling > self.ceiling:
            raise TruncationError("cannot raise the ceiling of a truncated series")
        return LaurentSeries(self.coeffs, ceiling, min(self.lo, ceiling))

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        c = min(self.ceiling, other.ceiling)
        out: Dict[int, Poly] = {}
        for src in (self.coeffs, other.coeffs):
            for s, p in src.items():
                if s < c:
                    out[s] = out.get(s, ZERO) ^ p
        return LaurentSeries(out, c, min(self.lo, other.lo, c))

    __sub__ = __add__

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        if isinstance(other, frozenset):
            return self.scale(other)
        c = min(self.ceiling + other.valuation(), other.ceiling + self.valuation())
        out: Dict[int, Poly] = {}
        for s1, p1 in self.coeffs.items():
            for s2, p2 in other.coeffs.items():
                s = s1 + s2
                if s < c:
                    out[s] = out.get(s, ZERO) ^ pmul(p1, p2)
        return LaurentSeries(out, c, min(self.lo + other.lo, c))

    def scale(self, p: Poly) -> "LaurentSeries":
        return LaurentSeries({s: pmul(q, p) for s, q in self.coeffs.items()}, self.ceiling, self.lo)

    def shift(self, k: int) -> "LaurentSeries":
        c = self.ceiling if self.ceiling >= EXACT else self.ceiling + k
        return LaurentSeries({s + k: p for s, p in self.coeffs.items()}, c, self.lo + k)

    def frobenius(self) -> "LaurentSeries":
        c = self.ceiling if self.ceiling >= EXACT else 2 * self.ceiling
        return LaurentSeries({2 * s: psquare(p) for s, p in self.coeffs.items()}, c, 2 * self.lo)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentSeries) and self.ceiling == other.ceiling
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ceiling, frozenset(self.coeffs.items())))

    def agrees_with(self, other: "LaurentSeries", ceiling: int | None = None) -> bool:
        """Equality of coefficients below a common ceiling."""
        c = min(self.ceiling, other.ceiling) if ceiling is None else ceiling
        if c > self.ceiling or c > other.ceiling:
            raise TruncationError("comparison ceiling exceeds a series ceiling")
        lo = min(self.lo, other.lo)
        return all(self.coeff(s) == other.coeff(s) for s in range(lo, c))

    def __repr__(self) -> str:
        return f"LaurentSeries({render_series(self)!r})"

    def __str__(self) -> str:
        return render_series(self)


def render_series(f: LaurentSeries) -> str:
    parts = []
    for s in sorted(f.coeffs):
        p = f.coeffs[s]
        cs = render_poly(p)
        tpart = "" if s == 0 else ("t" if s == 1 else f"t^{s}")
        if not tpart:
            parts.append(cs if len(p) == 1 else f"({cs})")
        elif cs == "1":
            parts.append(tpart)
        elif len(p) == 1:
            parts.append(f"{cs}*{tpart}")
        else:
            parts.append(f"({cs})*{tpart}")
    if f.ceiling < EXACT:
        parts.append(f"O(t^{f.ceiling})")
    return " + ".join(parts) if parts else "0"


def xi_series(ceiling: int) -> LaurentSeries:
    if ceiling < 2:
        raise ValueError("ceiling must be at least 2")
    out = {}
    i = 0
    while (1 << i) < ceiling:
        out[1 << i] = xi(i)
        i += 1
    return LaurentSeries(out, ceiling, 1)


def tau_series(ceiling: int) -> LaurentSeries:
    if ceiling < 2:
        raise ValueError("ceiling must be at least 2")
    out = {}
    i = 0
    while (1 << i) < ceiling:
        out[1 << i] = tau(i)
        i += 1
    return LaurentSeries(out, ceiling, 1)


def xibar_series(ceiling: int) -> LaurentSeries:
    if ceiling < 2:
        raise ValueError("ceiling must be at least 2")
    out = {}
    i = 0
    while (1 << i) < ceiling:
        out[1 << i] = conjugate_xi(i)
        i += 1
    return LaurentSeries(out, ceiling, 1)


def taubar_series(ceiling: int) -> LaurentSeries:
    if ceiling < 2:
        raise ValueError("ceiling must be at least 2")
    out = {}
    i = 0
    while (1 << i) < ceiling:
        out[1 << i] = conjugate_tau(i)
        i += 1
    return LaurentSeries(out, ceiling, 1)


def mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    return f * g


def inverse(f: LaurentSeries) -> LaurentSeries:
    """f^{-1} for f = t + higher terms."""
    if f.coeffs.get(1) != ONE or any(s < 1 for s in f.coeffs) or f.ceiling <= 1:
        raise ValueError("negative powers need a series with leading term exactly t")
    h = {s - 1: p for s, p in f.coeffs.items() if s > 1}
    if f.ceiling >= EXACT:
        if h:
            raise TruncationError("truncate the series before inverting it")
        return LaurentSeries({-1: ONE}, EXACT)
    n_known = f.ceiling - 1  # 1 + h is known below t^{n_known}
    w = [ONE]
    for n in range(1, n_known):
        acc = ZERO
        for s in range(1, n + 1):
            hs = h.get(s)
            if hs:
                acc = acc ^ pmul(hs, w[n - s])
        w.append(acc)
    return LaurentSeries({n - 1: p for n, p in enumerate(w)}, f.ceiling - 2, -1)


def power(f: LaurentSeries, r: int) -> LaurentSeries:
    if r == 0:
        return LaurentSeries.one()
    if r < 0:
        f = inverse(f)
        r = -r
    out = None
    base = f
    while r:
        if r & 1:
            out = base if out is None else out * base
        r >>= 1
        if r:
            base = base.frobenius()
    return out


def compose(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    """f(g(t)) for g of positive valuation."""
    vg = g.valuation()
    if not g.coeffs or vg < 1:
        raise ValueError("inner series must have positive valuation")
    cap = EXACT if f.ceiling >= EXACT else f.ceiling * vg
    acc = LaurentSeries({}, cap, min(cap, f.lo * vg))
    for s in sorted(f.coeffs):
        term = power(g, s).scale(f.coeffs[s])
        acc = acc + term
    return acc


def coeff(f: LaurentSeries, s: int) -> Poly:
    return f.coeff(s)


def residue(f: LaurentSeries) -> Poly:
    return f.coeff(-1)


def derivative(f: LaurentSeries) -> LaurentSeries:
    c = f.ceiling if f.ceiling >= EXACT else f.ceiling - 1
    return LaurentSeries({s - 1: p for s, p in f.coeffs.items() if s & 1}, c, f.lo - 1)


__all__ = [
    "Poly", "Mono", "ONE", "ZERO", "EXACT", "TruncationError", "LaurentSeries",
    "xi", "tau", "padd", "pmul", "psquare", "ppow", "mono_mul", "mono_degree",
    "poly_degrees", "render_poly", "render_mono", "render_series", "mono_key",
    "conjugate_xi", "conjugate_tau", "xi_series", "tau_series", "xibar_series",
    "taubar_series", "mul", "power", "inverse", "compose", "coeff", "residue",
    "derivative",
]
