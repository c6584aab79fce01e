"""Normal forms and structure maps for the C2-equivariant dual Steenrod algebra.

A monomial is (coeff, xi, tau) with coeff a PointClass, xi an exponent tuple
(xi[i-1] for xi_i) and tau a bitmask of the tau_i present.  ubar is
eliminated through ubar = u + tau0*a, and tau_i^2 is rewritten to
a*tau_{i+1} + u*xi_{i+1} + a*tau0*xi_{i+1}.

Tensors keep every base coefficient on the leftmost factor; a coefficient on
a later factor is pushed left through the right unit.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, NamedTuple, Tuple

from . import series as S
from .point import (
    Degree, Neg, Pos, PointElem, UNIT, class_key, degree_of, mul_class, render_class,
)


class ASMono(NamedTuple):
    coeff: object
    xi: Tuple[int, ...]
    tau: int


ONE_MONO = ASMono(UNIT, (), 0)


def _strip(t: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(t)
    while n and t[n - 1] == 0:
        n -= 1
    return t[:n]


def _addt(x, y):
    if len(x) < len(y):
        x, y = y, x
    return tuple(p + q for p, q in zip(x, y)) + x[len(y):]


def _xi_unit(i: int, e: int = 1) -> Tuple[int, ...]:
    return tuple([0] * (i - 1) + [e]) if i >= 1 and e else ()


def tau_indices(mask: int) -> list:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _toggle(acc: set, item) -> None:
    if item in acc:
        acc.remove(item)
    else:
        acc.add(item)


@lru_cache(maxsize=None)
def _tau_square(i: int) -> tuple:
    x = _xi_unit(i + 1)
    return (
        (Pos(0, 1), (), 1 << (i + 1)),
        (Pos(1, 0), x, 0),
        (Pos(0, 1), x, 1),
    )


@lru_cache(maxsize=None)
def tau_product(t1: int, t2: int) -> frozenset:
    """tau_{t1} * tau_{t2} as a set of (Pos coefficient, xi, tau)."""
    if t1 > t2:
        t1, t2 = t2, t1
    overlap = t1 & t2
    if not overlap:
        return frozenset([(UNIT, (), t1 | t2)])
    bit = overlap & -overlap
    i = bit.bit_length() - 1
    rest = tau_product(t1 ^ bit, t2 ^ bit)
    acc: set = set()
    for c1, x1, s1 in rest:
        for c2, x2, s2 in _tau_square(i):
            c = Pos(c1.i + c2.i, c1.j + c2.j)
            x = _addt(x1, x2)
            for c3, x3, s3 in tau_product(s1, s2):
                _toggle(acc, (Pos(c.i + c3.i, c.j + c3.j), _addt(x, x3), s3))
    return frozenset(acc)


def mono_mul(m1: ASMono, m2: ASMono, acc: set) -> None:
    c = mul_class(m1.coeff, m2.coeff)
    if c is None:
        return
    x = _addt(m1.xi, m2.xi)
    if not (m1.tau & m2.tau):
        _toggle(acc, ASMono(c, x, m1.tau | m2.tau))
        return
    for pc, px, pt in tau_product(m1.tau, m2.tau):
        c2 = mul_class(c, pc)
        if c2 is not None:
            _toggle(acc, ASMono(c2, _addt(x, px), pt))


def mono_degree(m: ASMono) -> Degree:
    return degree_of(m.coeff) + S.mono_degree((m.xi, _tau_tuple(m.tau)))


def _tau_tuple(mask: int) -> Tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(mask.bit_length()))


def mono_key(m: ASMono):
    d = mono_degree(m)
    return (d.a + d.b, d.a, class_key(m.coeff), S.mono_key((m.xi, _tau_tuple(m.tau))))


def render_mono(m: ASMono) -> str:
    body = S.render_mono((m.xi, _tau_tuple(m.tau)))
    if m.coeff == UNIT:
        return body
    c = render_class(m.coeff)
    return c if body == "1" else f"{c}*{body}"


class ASElem:
    """F2 sum of normalized monomials."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[ASMono] = ()):
        acc: set = set()
        for t in terms:
            _toggle(acc, t)
        self.terms = frozenset(acc)
        self._hash = None

    @classmethod
    def _raw(cls, fs) -> "ASElem":
        obj = cls.__new__(cls)
        obj.terms = fs if isinstance(fs, frozenset) else frozenset(fs)
        obj._hash = None
        return obj

    def __add__(self, other: "ASElem") -> "ASElem":
        return ASElem._raw(self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "ASElem") -> "ASElem":
        acc: set = set()
        for m1 in self.terms:
            for m2 in other.terms:
                mono_mul(m1, m2, acc)
        return ASElem._raw(frozenset(acc))

    def __pow__(self, n: int) -> "ASElem":
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, ASElem) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def sorted_terms(self) -> list:
        return sorted(self.terms, key=mono_key)

    def degrees(self) -> set:
        return {mono_degree(m) for m in self.terms}

    def __repr__(self) -> str:
        return f"ASElem({render(self)!r})"

    def __str__(self) -> str:
        return render(self)


def render(x: ASElem) -> str:
    if not x.terms:
        return "0"
    return " + ".join(render_mono(m) for m in x.sorted_terms())


ONE = ASElem([ONE_MONO])
ZERO = ASElem()


def coeff_elem(c) -> ASElem:
    return ASElem([ASMono(c, (), 0)])


def from_point(x: PointElem) -> ASElem:
    return ASElem(ASMono(c, (), 0) for c in x.terms)


def XI(i: int) -> ASElem:
    if i == 0:
        return ONE
    return ASElem([ASMono(UNIT, _xi_unit(i), 0)])


def TAU(i: int) -> ASElem:
    return ASElem([ASMono(UNIT, (), 1 << i)])


U = coeff_elem(Pos(1, 0))
A = coeff_elem(Pos(0, 1))
UBAR = U + A * TAU(0)


def mul(x: ASElem, y: ASElem) -> ASElem:
    return x * y


def normalize(raw: Iterable) -> ASElem:
    """Normal form of a raw sum.

    Each raw term is (coeff, xi exponents, tau exponents, ubar exponent); tau
    exponents may exceed one.
    """
    acc = ZERO
    for term in raw:
        term = tuple(term)
        if len(term) == 3:
            term += (0,)
        c, xi, tau, ub = term
        x = ASElem([ASMono(c, _strip(tuple(xi)), 0)])
        for i, e in enumerate(tau):
            for _ in range(e):
                x = x * TAU(i)
        for _ in range(ub):
            x = x * UBAR
        acc = acc + x
    return acc


def from_series_poly(p: S.Poly) -> ASElem:
    """Read a free polynomial in xi, tau as an element of A, applying the relations."""
    acc = ZERO
    for xi, tau in p:
        acc = acc + normalize([(UNIT, xi, tau, 0)])
    return acc


# ---------------------------------------------------------------- right unit


def _binom_odd(n: int, k: int) -> bool:
    return k >= 0 and n >= k and (n - k) & k == 0


@lru_cache(maxsize=None)
def _tau0_power(j: int) -> ASElem:
    return ONE if j == 0 else _tau0_power(j - 1) * TAU(0)


@lru_cache(maxsize=None)
def eta_R_class(c) -> ASElem:
    if type(c) is Pos:
        out = ONE
        for _ in range(c.i):
            out = out * UBAR
        return out * coeff_elem(Pos(0, c.j)) if c.j else out
    k, n = c.k, c.n
    out = ZERO
    for j in range(k + 1):
        if _binom_odd(n + j, j):
            out = out + coeff_elem(Neg(k - j, n + j)) * _tau0_power(j)
    return out


class EtaTruncationError(ValueError):
    """The requested ceiling is too short for the tau0-expansion."""


def eta_R(x: PointElem, ceiling: int | None = None) -> ASElem:
    """Right unit.  On th/(a^k u^n) the expansion has k+1 tau0-terms; ceiling bounds them."""
    out = ZERO
    for c in x.terms:
        if ceiling is not None and type(c) is Neg and c.k + 1 > ceiling:
            raise EtaTruncationError(
                f"eta_R of {render_class(c)} needs {c.k + 1} tau0-terms, ceiling is {ceiling}")
        out = out + eta_R_class(c)
    return out


def eta_R_elem(x: ASElem) -> ASElem:
    """Right unit applied to an element that is a pure coefficient sum."""
    out = ZERO
    for m in x.terms:
        if m.xi or m.tau:
            raise ValueError("eta_R takes coefficient-ring elements")
        out = out + eta_R_class(m.coeff)
    return out


# ---------------------------------------------------------------- tensors


class TensorElem:
    """F2 sum of n-fold tensors; each term is a tuple of ASMono with all coefficients on factor 0."""

    __slots__ = ("terms", "n")

    def __init__(self, terms: Iterable[tuple], n: int):
        self.terms = frozenset(terms)
        self.n = n

    def __add__(self, other: "TensorElem") -> "TensorElem":
        return TensorElem(self.terms ^ other.terms, self.n)

    def __mul__(self, other: "TensorElem") -> "TensorElem":
        raw: set = set()
        for t1 in self.terms:
            for t2 in other.terms:
                parts = []
                for f1, f2 in zip(t1, t2):
                    acc: set = set()
                    mono_mul(f1, f2, acc)
                    parts.append(acc)
                for combo in _product(parts):
                    _toggle(raw, combo)
        return normalize_tensor(raw, self.n)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElem) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.terms))

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self) -> list:
        return sorted(self.terms, key=lambda t: tuple(mono_key(f) for f in t))

    def __repr__(self):
        return f"TensorElem({render_tensor(self)!r})"

    def __str__(self):
        return render_tensor(self)


def _product(parts):
    if not parts:
        yield ()
        return
    head, rest = parts[0], parts[1:]
    tails = list(_product(rest))
    for h in head:
        for t in tails:
            yield (h,) + t


def render_tensor(x: TensorElem) -> str:
    if not x.terms:
        return "0"
    return " + ".join(" (x) ".join(render_mono(f) for f in t) for t in x.sorted_terms())


def normalize_tensor(raw: Iterable[tuple], n: int) -> TensorElem:
    """Move coefficients left, one factor at a time, via x (x) c*y = x*eta_R(c) (x) y."""
    work: set = set()
    for t in raw:
        _toggle(work, tuple(t))
    for k in range(n - 1, 0, -1):
        nxt: set = set()
        for t in work:
            c = t[k].coeff
            if c == UNIT:
                _toggle(nxt, t)
                continue
            stripped = ASMono(UNIT, t[k].xi, t[k].tau)
            acc: set = set()
            left = t[k - 1]
            for m in eta_R_class(c).terms:
                mono_mul(left, m, acc)
            for m in acc:
                _toggle(nxt, t[:k - 1] + (m, stripped) + t[k + 1:])
        work = nxt
    return TensorElem(work, n)


def tensor(*factors: ASElem) -> TensorElem:
    raw: set = set()
    for combo in _product([f.terms for f in factors]):
        _toggle(raw, combo)
    return normalize_tensor(raw, len(factors))


# ---------------------------------------------------------------- coproduct


def _xi_power(i: int, e: int) -> ASMono:
    return ASMono(UNIT, _xi_unit(i, e), 0)


@lru_cache(maxsize=None)
def _psi_xi(k: int) -> TensorElem:
    return TensorElem([(_xi_power(k - j, 1 << j) if k > j else ONE_MONO, _xi_power(j, 1) if j else ONE_MONO)
                       for j in range(k + 1)], 2)


@lru_cache(maxsize=None)
def _psi_tau(k: int) -> TensorElem:
    terms = {(ASMono(UNIT, (), 1 << k), ONE_MONO)}
    for j in range(k + 1):
        left = _xi_power(k - j, 1 << j) if k > j else ONE_MONO
        terms.add((left, ASMono(UNIT, (), 1 << j)))
    return TensorElem(terms, 2)


TENSOR_ONE2 = TensorElem([(ONE_MONO, ONE_MONO)], 2)


@lru_cache(maxsize=None)
def _psi_body(xi: Tuple[int, ...], tau: int) -> TensorElem:
    for i, e in enumerate(xi, start=1):
        if e:
            rest = list(xi)
            rest[i - 1] -= 1
            return _psi_xi(i) * _psi_body(_strip(tuple(rest)), tau)
    if tau:
        bit = tau & -tau
        return _psi_tau(bit.bit_length() - 1) * _psi_body((), tau ^ bit)
    return TENSOR_ONE2


def psi(x: ASElem) -> TensorElem:
    """Coproduct, a left-linear ring map."""
    acc: set = set()
    for m in x.terms:
        for left, right in _psi_body(m.xi, m.tau).terms:
            c = mul_class(m.coeff, left.coeff)
            if c is not None:
                _toggle(acc, (ASMono(c, left.xi, left.tau), right))
    return TensorElem(acc, 2)


def psi_tensor_factor(x: TensorElem, k: int) -> TensorElem:
    """Apply psi to factor k of an n-fold tensor, giving an (n+1)-fold tensor."""
    raw: set = set()
    for t in x.terms:
        for left, right in psi(ASElem([t[k]])).terms:
            _toggle(raw, t[:k] + (left, right) + t[k + 1:])
    return normalize_tensor(raw, x.n + 1)


def counit_class(m: ASMono):
    return m.coeff if not m.xi and not m.tau else None


def counit(x: ASElem) -> PointElem:
    return PointElem(c for c in (counit_class(m) for m in x.terms) if c is not None)


def collapse_right(x: TensorElem) -> ASElem:
    # (1 (x) eps): the right factor is coefficient-free, so only the unit survives
    return ASElem(t[0] for t in x.terms if t[1] == ONE_MONO)


def collapse_left(x: TensorElem) -> ASElem:
    acc: set = set()
    for left, right in x.terms:
        c = counit_class(left)
        if c is not None:
            d = mul_class(c, right.coeff)
            if d is not None:
                _toggle(acc, ASMono(d, right.xi, right.tau))
    return ASElem._raw(frozenset(acc))


# ---------------------------------------------------------------- Bockstein and conjugation


class NegativeConeError(ValueError):
    """The operation is not defined on negative-cone coefficients."""


def bockstein(x: ASElem) -> ASElem:
    """Derivation with beta(tau_i) = xi_i (i >= 1), beta(tau0) = 0, beta(u) = a."""
    acc: set = set()
    for m in x.terms:
        c = m.coeff
        if type(c) is Neg:
            raise NegativeConeError("Bockstein of a negative-cone coefficient is not determined")
        if c.i & 1:
            _toggle(acc, ASMono(Pos(c.i - 1, c.j + 1), m.xi, m.tau))
        for i in tau_indices(m.tau):
            if i >= 1:
                _toggle(acc, ASMono(c, _addt(m.xi, _xi_unit(i)), m.tau ^ (1 << i)))
    return ASElem._raw(frozenset(acc))


@lru_cache(maxsize=None)
def _chi_xi(i: int) -> ASElem:
    return from_series_poly(S.conjugate_xi(i))


@lru_cache(maxsize=None)
def _chi_tau(i: int) -> ASElem:
    return from_series_poly(S.conjugate_tau(i))


@lru_cache(maxsize=None)
def _chi_mono(m: ASMono) -> ASElem:
    c = m.coeff
    out = coeff_elem(Pos(0, c.j)) if c.j else ONE
    for _ in range(c.i):
        out = out * UBAR
    for i, e in enumerate(m.xi, start=1):
        for _ in range(e):
            out = out * _chi_xi(i)
    for i in tau_indices(m.tau):
        out = out * _chi_tau(i)
    return out


def conjugate(x: ASElem) -> ASElem:
    out = ZERO
    for m in x.terms:
        if type(m.coeff) is Neg:
            raise NegativeConeError("conjugation of a negative-cone coefficient is not implemented")
        out = out + _chi_mono(m)
    return out


def degree(x: ASElem) -> Degree:
    ds = x.degrees()
    if len(ds) != 1:
        raise ValueError("element is not homogeneous")
    return next(iter(ds))


__all__ = [
    "ASMono", "ASElem", "TensorElem", "ONE", "ZERO", "ONE_MONO", "U", "A", "UBAR",
    "XI", "TAU", "coeff_elem", "from_point", "normalize", "from_series_poly", "mul",
    "eta_R", "eta_R_class", "eta_R_elem", "psi", "psi_tensor_factor", "tensor",
    "normalize_tensor", "counit", "collapse_left", "collapse_right", "bockstein",
    "conjugate", "render", "render_mono", "render_tensor", "mono_degree", "degree",
    "tau_indices", "NegativeConeError", "EtaTruncationError",
]
