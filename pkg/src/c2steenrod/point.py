"""RO(C2)-graded coefficient ring of HF at the top level, with res, tr and the Tate boundary.

Classes are either in the polynomial cone u^i a^j or in the square-zero
negative cone th/(a^k u^n).  Elements are F2 sums of classes.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Union


class Degree(NamedTuple):
    """Virtual representation a + b*sigma."""

    a: int
    b: int

    def __add__(self, other):  # type: ignore[override]
        return Degree(self.a + other[0], self.b + other[1])

    def __sub__(self, other):
        return Degree(self.a - other[0], self.b - other[1])

    def __neg__(self):
        return Degree(-self.a, -self.b)

    def scale(self, n: int) -> "Degree":
        return Degree(n * self.a, n * self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


ZERO = Degree(0, 0)
ONE = Degree(1, 0)
SIGMA = Degree(0, 1)
RHO = Degree(1, 1)

U_DEG = Degree(1, -1)
A_DEG = Degree(0, -1)
THETA_DEG = Degree(-2, 2)


class Pos(NamedTuple):
    """u^i a^j."""

    i: int
    j: int
    cone: int = 0  # keeps Pos and Neg unequal as tuples


class Neg(NamedTuple):
    """th / (a^k u^n)."""

    k: int
    n: int
    cone: int = 1


PointClass = Union[Pos, Neg]

UNIT = Pos(0, 0)


def is_pos(c) -> bool:
    return type(c) is Pos


def degree_of(c: PointClass) -> Degree:
    if type(c) is Pos:
        return Degree(c.i, -c.i - c.j)
    return Degree(-(2 + c.n), 2 + c.k + c.n)


def class_key(c: PointClass):
    # canonical order: polynomial cone first, then by exponents
    return (0, c[0], c[1]) if type(c) is Pos else (1, c[0], c[1])


def basis_at(d) -> list:
    a, b = d
    out = []
    if a >= 0 and -a - b >= 0:
        out.append(Pos(a, -a - b))
    n = -2 - a
    k = a + b
    if n >= 0 and k >= 0:
        out.append(Neg(k, n))
    return out


def mul_class(x: PointClass, y: PointClass):
    """Product of two classes; None when it vanishes."""
    if type(x) is Pos:
        if type(y) is Pos:
            return Pos(x.i + y.i, x.j + y.j)
        k, n = y.k - x.j, y.n - x.i
        return Neg(k, n) if k >= 0 and n >= 0 else None
    if type(y) is Pos:
        return mul_class(y, x)
    return None


def _toggle(acc: set, item) -> None:
    if item in acc:
        acc.remove(item)
    else:
        acc.add(item)


class PointElem:
    """F2 sum of PointClass."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable = ()):
        acc: set = set()
        for t in terms:
            _toggle(acc, t)
        self.terms = frozenset(acc)
        self._hash = None

    @classmethod
    def of(cls, *classes) -> "PointElem":
        return cls(classes)

    def __add__(self, other: "PointElem") -> "PointElem":
        return PointElem._raw(self.terms ^ other.terms)

    __sub__ = __add__

    @classmethod
    def _raw(cls, fs: frozenset) -> "PointElem":
        obj = cls.__new__(cls)
        obj.terms = fs
        obj._hash = None
        return obj

    def __mul__(self, other: "PointElem") -> "PointElem":
        acc: set = set()
        for x in self.terms:
            for y in other.terms:
                z = mul_class(x, y)
                if z is not None:
                    _toggle(acc, z)
        return PointElem._raw(frozenset(acc))

    def __eq__(self, other) -> bool:
        return isinstance(other, PointElem) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def sorted_terms(self) -> list:
        return sorted(self.terms, key=class_key)

    def degrees(self) -> set:
        return {degree_of(c) for c in self.terms}

    def __repr__(self) -> str:
        return f"PointElem({render_point(self)!r})"

    def __str__(self) -> str:
        return render_point(self)


def mul(x: PointElem, y: PointElem) -> PointElem:
    return x * y


# ---------------------------------------------------------------- rendering


def _power(sym: str, e: int) -> str:
    return sym if e == 1 else f"{sym}^{e}"


def render_class(c: PointClass) -> str:
    if type(c) is Pos:
        parts = [_power(s, e) for s, e in (("u", c.i), ("a", c.j)) if e]
        return "*".join(parts) if parts else "1"
    den = [_power(s, e) for s, e in (("a", c.k), ("u", c.n)) if e]
    if not den:
        return "th"
    if len(den) == 1:
        return f"th/{den[0]}"
    return f"th/({'*'.join(den)})"


def render_point(x: PointElem) -> str:
    if not x.terms:
        return "0"
    return " + ".join(render_class(c) for c in x.sorted_terms())


# ---------------------------------------------------------------- underlying level


class UnderlyingElem:
    """F2 sum of res(u)^i, i in Z."""

    __slots__ = ("exps",)

    def __init__(self, exps: Iterable[int] = ()):
        acc: set = set()
        for e in exps:
            _toggle(acc, e)
        self.exps = frozenset(acc)

    def __add__(self, other):
        return UnderlyingElem(list(self.exps) + list(other.exps))

    def __mul__(self, other):
        return UnderlyingElem(x + y for x in self.exps for y in other.exps)

    def __eq__(self, other):
        return isinstance(other, UnderlyingElem) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __bool__(self):
        return bool(self.exps)

    def act_gamma(self) -> "UnderlyingElem":
        # C2 acts trivially on res(u) mod 2
        return self

    def __repr__(self):
        if not self.exps:
            return "UnderlyingElem(0)"
        return "UnderlyingElem(" + " + ".join(f"r^{e}" for e in sorted(self.exps)) + ")"


def restriction(x: PointElem) -> UnderlyingElem:
    return UnderlyingElem(c.i for c in x.terms if type(c) is Pos and c.j == 0)


def transfer(y: UnderlyingElem) -> PointElem:
    return PointElem(Neg(0, -m - 2) for m in y.exps if m <= -2)


# ---------------------------------------------------------------- Tate ring


class TateClass(NamedTuple):
    """u^i a^j in F2[u^{+-1}, a^{+-1}]."""

    i: int
    j: int

    def __mul__(self, other):  # type: ignore[override]
        return TateClass(self.i + other[0], self.j + other[1])


def tate_boundary(z: TateClass) -> PointElem:
    if z.i <= -1 and z.j <= -1:
        return PointElem.of(Neg(-z.j - 1, -z.i - 1))
    return PointElem()


def pos_elem(i: int = 0, j: int = 0) -> PointElem:
    return PointElem.of(Pos(i, j))


def neg_elem(k: int = 0, n: int = 0) -> PointElem:
    return PointElem.of(Neg(k, n))


def classes_in_box(bound: int) -> list:
    """All classes whose degree has |a|, |b| <= bound."""
    out = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            out.extend(basis_at(Degree(a, b)))
    return out


__all__ = [
    "Degree", "ZERO", "ONE", "SIGMA", "RHO", "U_DEG", "A_DEG", "THETA_DEG",
    "Pos", "Neg", "PointClass", "UNIT", "PointElem", "UnderlyingElem", "TateClass",
    "degree_of", "basis_at", "mul", "mul_class", "restriction", "transfer",
    "tate_boundary", "render_class", "render_point", "class_key", "pos_elem",
    "neg_elem", "classes_in_box", "is_pos",
]
