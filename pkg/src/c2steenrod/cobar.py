"""Windowed cobar complexes and Ext charts over F2.

Three Hopf algebroids share one interface:

* ``lambda``: HF[tau_0, tau_1, ...]/(tau_i^2 = a*tau_{i+1}), tau_i primitive.
* ``etau0``: the exterior quotient E(tau_0).
* ``astar-trunc``: the full A, enumerated only in the degrees a window needs.

A cobar word c[g_1|...|g_s]m carries its coefficient c on the left, letters
g_i from a basis of the augmentation ideal, and a tail m from the comodule
(always 1 for HF).  The differential is the mod 2 sum of the cofaces; words
with a unit letter are degenerate and dropped.  Everything is computed one
bidegree (s, V) at a time, with V the total internal degree.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from . import dual as D
from .point import Degree, Neg, Pos, UNIT, basis_at, degree_of, mul_class, render_class


class BudgetExceeded(RuntimeError):
    """A matrix in the window is larger than the configured budget."""


class WindowExhausted(ValueError):
    """A word lies outside the window it was asked about."""


DEFAULT_BUDGET = 200_000


def default_budget() -> int:
    return int(os.environ.get("C2STEENROD_BUDGET", DEFAULT_BUDGET))


# ---------------------------------------------------------------- GF(2) elimination


class Eliminator:
    """Incremental row echelon form over F2 with rows as int bitsets.

    Pivots are the lowest set bit, so the result does not depend on the
    order in which rows arrive, only the rank does matter to callers.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: Dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            low = v & -v
            row = self.pivots.get(low)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        self.pivots[v & -v] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def gf2_rank(rows: Iterable[int]) -> int:
    e = Eliminator()
    for r in rows:
        e.add(r)
    return e.rank


# ---------------------------------------------------------------- Lambda


class LambdaMonomial(NamedTuple):
    coeff: object
    tau: int


def _a_times(c, e: int):
    return c if e == 0 else mul_class(Pos(0, e), c)


def lambda_tau_product(s: int, t: int) -> Tuple[int, int]:
    """tau_S * tau_T = a^carries * tau_{S+T}: squaring carries like binary addition."""
    total = s + t
    return bin(s).count("1") + bin(t).count("1") - bin(total).count("1"), total


def lambda_mul(x: LambdaMonomial, y: LambdaMonomial) -> Optional[LambdaMonomial]:
    c = mul_class(x.coeff, y.coeff)
    if c is None:
        return None
    e, mask = lambda_tau_product(x.tau, y.tau)
    c = _a_times(c, e)
    return None if c is None else LambdaMonomial(c, mask)


def _binom_odd(n: int, k: int) -> bool:
    return 0 <= k <= n and (n - k) & k == 0


@lru_cache(maxsize=None)
def lambda_eta_R(c) -> Tuple[LambdaMonomial, ...]:
    """Right unit in Lambda, where ubar = u + a*tau_0 and tau_0^j = a^(j - popcount j) tau_{mask j}."""
    out = []
    if type(c) is Pos:
        for l in range(c.i + 1):
            if _binom_odd(c.i, l):
                extra = l - bin(l).count("1")
                out.append(LambdaMonomial(Pos(c.i - l, c.j + l + extra), l))
        return tuple(out)
    for j in range(c.k + 1):
        if _binom_odd(c.n + j, j):
            d = _a_times(Neg(c.k - j, c.n + j), j - bin(j).count("1"))
            if d is not None:
                out.append(LambdaMonomial(d, j))
    return tuple(out)


def lambda_mask_degree(mask: int) -> Degree:
    return Degree(mask, mask - bin(mask).count("1"))


def _proper_splits(mask: int):
    sub = (mask - 1) & mask
    while sub:
        yield sub, mask ^ sub
        sub = (sub - 1) & mask


# ---------------------------------------------------------------- words


class CobarWord(NamedTuple):
    coeff: object
    letters: tuple
    tail: tuple = ()

    @property
    def s(self) -> int:
        return len(self.letters)


def _toggle(acc: set, item) -> None:
    if item in acc:
        acc.remove(item)
    else:
        acc.add(item)


def _render_tau_mask(mask: int) -> str:
    return "*".join(f"tau{i}" for i in D.tau_indices(mask)) or "1"


# ---------------------------------------------------------------- Hopf algebroids


class _Hopf:
    name = ""
    modules: Tuple[str, ...] = ("hf",)

    def letter_degree(self, letter) -> Degree:
        raise NotImplementedError

    def letters_upto(self, amax: int) -> list:
        """Letters of a-degree at most amax (every letter has a >= 1 and a+b >= a)."""
        raise NotImplementedError

    def tails_upto(self, module: str, amax: int) -> list:
        return [()]

    def tail_degree(self, tail) -> Degree:
        return Degree(0, 0)

    def render_letter(self, letter) -> str:
        raise NotImplementedError

    def differential(self, w: CobarWord, module: str = "hf") -> frozenset:
        raise NotImplementedError

    def word_degree(self, w: CobarWord) -> Degree:
        d = degree_of(w.coeff) + self.tail_degree(w.tail)
        for l in w.letters:
            d = d + self.letter_degree(l)
        return d

    def render_word(self, w: CobarWord) -> str:
        body = "[" + "|".join(self.render_letter(l) for l in w.letters) + "]"
        c = "" if w.coeff == UNIT else render_class(w.coeff)
        tail = self.render_tail(w.tail)
        return f"{c}{body}{tail}"

    def render_tail(self, tail) -> str:
        return ""

    def sort_key(self, letter):
        return letter


class LambdaHopf(_Hopf):
    name = "lambda"

    def letter_degree(self, mask: int) -> Degree:
        return lambda_mask_degree(mask)

    def letters_upto(self, amax: int) -> list:
        return list(range(1, amax + 1))

    def render_letter(self, mask: int) -> str:
        return _render_tau_mask(mask)

    def differential(self, w: CobarWord, module: str = "hf") -> frozenset:
        acc: set = set()
        for m in lambda_eta_R(w.coeff):
            if m.tau:
                _toggle(acc, CobarWord(m.coeff, (m.tau,) + w.letters))
        for i, mask in enumerate(w.letters):
            for x, y in _proper_splits(mask):
                _toggle(acc, CobarWord(w.coeff, w.letters[:i] + (x, y) + w.letters[i + 1:]))
        return frozenset(acc)


class ETau0Hopf(LambdaHopf):
    """E(tau_0): Lambda modulo tau_1, tau_2, ...; the only letter is tau_0."""

    name = "etau0"

    def letters_upto(self, amax: int) -> list:
        return [1] if amax >= 1 else []

    def differential(self, w: CobarWord, module: str = "hf") -> frozenset:
        acc: set = set()
        for m in lambda_eta_R(w.coeff):
            if m.tau == 1:
                _toggle(acc, CobarWord(m.coeff, (1,) + w.letters))
        return frozenset(acc)


def _xi_monomials_upto(amax: int) -> list:
    """Exponent tuples of xi-monomials with a-degree at most amax."""
    out = []

    def rec(i: int, budget: int, cur: list):
        w = (1 << i) - 1
        if w > budget:
            out.append(D._strip(tuple(cur)))
            return
        for e in range(budget // w + 1):
            rec(i + 1, budget - e * w, cur + [e])

    rec(1, amax, [])
    return sorted(set(out))


class AStarTrunc(_Hopf):
    """A itself, letters enumerated up to the a-degree a window needs."""

    name = "astar-trunc"
    modules = ("hf", "pstar")

    def letter_degree(self, letter) -> Degree:
        return D.mono_degree(D.ASMono(UNIT, letter[0], letter[1]))

    @lru_cache(maxsize=None)
    def letters_upto(self, amax: int) -> list:
        out = []
        for xi in _xi_monomials_upto(amax):
            xa = self.letter_degree((xi, 0)).a
            for mask in range(0, 1 << max(amax.bit_length(), 1)):
                if (xi, mask) == ((), 0):
                    continue
                if xa + mask <= amax:
                    out.append((xi, mask))
        return sorted(out, key=self.sort_key)

    def tails_upto(self, module: str, amax: int) -> list:
        if module == "hf":
            return [()]
        return _xi_monomials_upto(amax)

    def tail_degree(self, tail) -> Degree:
        return self.letter_degree((tail, 0))

    def render_letter(self, letter) -> str:
        return D.render_mono(D.ASMono(UNIT, letter[0], letter[1]))

    def render_tail(self, tail) -> str:
        return "" if not tail else self.render_letter((tail, 0))

    def sort_key(self, letter):
        d = self.letter_degree(letter)
        return (d.a, d.b, letter[1], letter[0])

    def differential(self, w: CobarWord, module: str = "hf") -> frozenset:
        s = w.s
        head = D.ASMono(w.coeff, *(w.letters[0] if s else (w.tail, 0)))
        factors = [head] + [D.ASMono(UNIT, l[0], l[1]) for l in w.letters[1:]]
        if s:
            factors.append(D.ASMono(UNIT, w.tail, 0))
        x = D.TensorElem([tuple(factors)], s + 1)
        total: set = set()
        # coface 0: a unit in front, pushing the coefficient through eta_R
        for t in D.normalize_tensor([(D.ONE_MONO,) + tuple(factors)], s + 2).terms:
            _toggle(total, t)
        for k in range(s + 1):
            if k == s and module == "hf":
                continue  # the unit of HF is primitive
            for t in D.psi_tensor_factor(x, k).terms:
                _toggle(total, t)
        acc: set = set()
        for t in total:
            letters = t[:-1]
            if any(not f.xi and not f.tau for f in letters):
                continue
            if t[-1].tau:
                raise WindowExhausted("coaction left the comodule")
            _toggle(acc, CobarWord(t[0].coeff, tuple((f.xi, f.tau) for f in letters), t[-1].xi))
        return frozenset(acc)


HOPF = {"lambda": LambdaHopf(), "etau0": ETau0Hopf(), "astar-trunc": AStarTrunc()}


def get_hopf(name: str) -> _Hopf:
    try:
        return HOPF[name]
    except KeyError:
        raise ValueError(f"unknown Hopf algebroid {name!r}") from None


def cobar_differential(w: CobarWord, hopf: str = "lambda", module: str = "hf") -> frozenset:
    """d(w) as a set of words (an F2 sum)."""
    return get_hopf(hopf).differential(w, module)


# ---------------------------------------------------------------- basis enumeration


def cobar_basis(hopf: str, module: str, s: int, V) -> list:
    """All cobar words of length s and internal degree V, in a canonical order."""
    h = get_hopf(hopf)
    V = Degree(*V)
    # a Pos coefficient needs letters with a-sum <= V.a, a Neg one needs
    # (a+b)-sum <= V.a + V.b; every letter has a >= 1 and b >= 0
    amax = max(V.a, V.a + V.b)
    if s and amax < s:
        return []
    letters = h.letters_upto(max(amax - s + 1, 0)) if s else []
    ldeg = {l: h.letter_degree(l) for l in letters}
    out = []

    def rec(prefix: tuple, da: int, db: int):
        if len(prefix) == s:
            for tail in h.tails_upto(module, amax):
                td = h.tail_degree(tail)
                for c in basis_at(Degree(V.a - da - td.a, V.b - db - td.b)):
                    out.append(CobarWord(c, prefix, tail))
            return
        remaining = s - len(prefix) - 1
        for l in letters:
            d = ldeg[l]
            na, nb = da + d.a, db + d.b
            if na + remaining > V.a and na + nb + remaining > V.a + V.b:
                continue
            rec(prefix + (l,), na, nb)

    rec((), 0, 0)
    return out


# ---------------------------------------------------------------- charts


def _v_name(letters: tuple) -> str:
    counts: Dict[int, int] = {}
    for m in letters:
        i = m.bit_length() - 1
        counts[i] = counts.get(i, 0) + 1
    return "*".join(f"v{i}" if e == 1 else f"v{i}^{e}" for i, e in sorted(counts.items()))


def _gen_name(c, letters: tuple) -> str:
    v = _v_name(letters)
    if c == UNIT:
        return v or "1"
    return render_class(c) + ("*" + v if v else "")


@dataclass
class ExtEntry:
    s: int
    degree: Degree
    dim: int
    gens: List[str] = field(default_factory=list)


@dataclass
class ExtChart:
    hopf: str
    module: str
    smax: int
    entries: Dict[Tuple[int, Degree], ExtEntry] = field(default_factory=dict)

    def dim(self, s: int, V) -> int:
        e = self.entries.get((s, Degree(*V)))
        return 0 if e is None else e.dim

    def sorted_entries(self) -> List[ExtEntry]:
        return [self.entries[k] for k in sorted(self.entries)]

    def to_json(self) -> list:
        return [{"s": e.s, "degree": {"a": e.degree.a, "b": e.degree.b}, "dim": e.dim, "gens": list(e.gens)}
                for e in self.sorted_entries()]


def _vectors(h: _Hopf, module: str, words: list, index: Dict, budget: int) -> List[int]:
    rows = []
    for w in words:
        v = 0
        for t in h.differential(w, module):
            j = index.get(t)
            if j is None:
                j = index[t] = len(index)
                if j >= budget:
                    raise BudgetExceeded(f"more than {budget} target words")
            v ^= 1 << j
        rows.append(v)
    return rows


def ext_at(hopf: str, module: str, s: int, V, budget: Optional[int] = None,
           seed: Optional[int] = None, name_gens: bool = True) -> ExtEntry:
    """Ext^{s,V} as dim ker d_s - rank d_{s-1}; a seed shuffles the basis order."""
    h = get_hopf(hopf)
    V = Degree(*V)
    budget = default_budget() if budget is None else budget
    here = cobar_basis(hopf, module, s, V)
    prev = cobar_basis(hopf, module, s - 1, V) if s > 0 else []
    if len(here) + len(prev) > budget:
        raise BudgetExceeded(f"{len(here) + len(prev)} words at s={s}, V={tuple(V)}")
    if seed is not None:
        rng = random.Random(seed)
        rng.shuffle(here)
        rng.shuffle(prev)
    rank_s = gf2_rank(_vectors(h, module, here, {}, budget))
    pos = {w: i for i, w in enumerate(here)}
    image = Eliminator()
    for row in _vectors(h, module, prev, pos, budget):
        image.add(row)
    dim = len(here) - rank_s - image.rank
    gens: List[str] = []
    if name_gens and dim and hopf in ("lambda", "etau0") and module == "hf":
        gens = _name_generators(h, module, here, pos, image, dim)
    return ExtEntry(s, V, dim, gens)


def _name_generators(h, module, here, pos, image: Eliminator, dim: int) -> List[str]:
    """Names for cycles c[tau_{i_1}|...|tau_{i_s}] with sorted single-tau letters that are independent mod boundaries."""
    names = []
    span = Eliminator()
    span.pivots = dict(image.pivots)
    for w in sorted(here, key=lambda w: (tuple(w.letters), w.coeff.cone, tuple(w.coeff[:2]))):
        if any(m & (m - 1) for m in w.letters) or list(w.letters) != sorted(w.letters):
            continue
        if h.differential(w, module):
            continue
        if span.add(1 << pos[w]):
            names.append(_gen_name(w.coeff, w.letters))
            if len(names) == dim:
                break
    return names


def stems(nmax: int, box: Optional[int] = None) -> List[Degree]:
    """Stems V - s on the rho line and the (rho-line - 1) line, or a full box."""
    if box is not None:
        return [Degree(a, b) for a in range(-box, box + 1) for b in range(-box, box + 1)]
    out = []
    for n in range(nmax + 1):
        out.append(Degree(n, n))
        out.append(Degree(n - 1, n))
    return out


def ext_window(hopf: str = "lambda", module: str = "hf", smax: int = 6, nmax: int = 6,
               box: Optional[int] = None, budget: Optional[int] = None,
               seed: Optional[int] = None, keep_zero: bool = True) -> ExtChart:
    """Chart over s <= smax and the chosen stems; V = stem + s."""
    chart = ExtChart(hopf, module, smax)
    for s in range(smax + 1):
        for st in stems(nmax, box):
            V = Degree(st.a + s, st.b)
            e = ext_at(hopf, module, s, V, budget=budget, seed=seed)
            if e.dim or keep_zero:
                chart.entries[(s, V)] = e
    return chart


def v_monomial_count(s: int, n: int, top: int = 2) -> int:
    """Monomials in v_0..v_top with s factors on the stem n*rho, by direct enumeration."""
    count = 0

    def rec(i: int, left: int, weight: int):
        nonlocal count
        if i > top:
            count += left == 0 and weight == 0
            return
        w = (1 << i) - 1
        for e in range(left + 1):
            if e * w > weight:
                break
            rec(i + 1, left - e, weight - e * w)

    rec(0, s, n)
    return count


# ---------------------------------------------------------------- Cotor over E(tau_0)


def cotor_e_tau0(smax: int = 6, bound: int = 6) -> ExtChart:
    """Homology of HF -> Sigma HF -> ... at every (s, V) with s <= smax, |V.a|, |V.b| <= bound."""
    chart = ExtChart("etau0", "hf", smax)
    for s in range(smax + 1):
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                V = Degree(a, b)
                chart.entries[(s, V)] = ext_at("etau0", "hf", s, V)
    return chart


def cotor_closed_form(s: int, V, corrected: bool = False) -> List[str]:
    """Additive basis of (F[u^2, a] + J)[v0]/(v0*a, v0*J) at (s, V); J = th/(a^k u^odd).

    With corrected=True the primitive classes th/u^(2m) and their v0-multiples
    are added.
    """
    V = Degree(*V)
    stem = Degree(V.a - s, V.b)
    out = []
    for c in basis_at(stem):
        if type(c) is Pos:
            if c.i % 2 == 0 and (s == 0 or c.j == 0):
                out.append(c)
        else:
            if s == 0 and c.n % 2 == 1:
                out.append(c)
            elif corrected and c.k == 0 and c.n % 2 == 0:
                out.append(c)
    return [_gen_name(c, (1,) * s) for c in out]


def compare_cotor(chart: ExtChart, corrected: bool = False) -> List[dict]:
    """Bidegrees where the computed chart and the closed form disagree."""
    bad = []
    for (s, V), e in sorted(chart.entries.items()):
        want = cotor_closed_form(s, V, corrected)
        if e.dim != len(want):
            bad.append({"s": s, "degree": {"a": V.a, "b": V.b}, "computed": e.dim, "closed_form": len(want)})
    return bad


# ---------------------------------------------------------------- change of rings


@dataclass
class ChangeOfRingsReport:
    passed: bool
    checked: int
    mismatches: List[dict]
    budget_hit: Optional[str] = None


def change_of_rings_check(smax: int = 2, total: int = 6, budget: Optional[int] = None) -> ChangeOfRingsReport:
    """Compare Ext over A with comodule P and Ext over Lambda with comodule HF.

    The window is s <= smax and |V.a| + |V.b| <= total.
    """
    mismatches = []
    checked = 0
    for s in range(smax + 1):
        for a in range(-total, total + 1):
            for b in range(-(total - abs(a)), total - abs(a) + 1):
                V = Degree(a, b)
                try:
                    big = ext_at("astar-trunc", "pstar", s, V, budget=budget, name_gens=False)
                except BudgetExceeded as exc:
                    return ChangeOfRingsReport(False, checked, mismatches, str(exc))
                small = ext_at("lambda", "hf", s, V, budget=budget, name_gens=False)
                checked += 1
                if big.dim != small.dim:
                    mismatches.append({"s": s, "degree": {"a": a, "b": b},
                                       "astar_pstar": big.dim, "lambda_hf": small.dim})
    return ChangeOfRingsReport(not mismatches, checked, mismatches)


def d_squared_zero(hopf: str, module: str, s: int, V) -> Optional[CobarWord]:
    """First word w in the (s, V) basis with d(d(w)) != 0, or None."""
    h = get_hopf(hopf)
    for w in cobar_basis(hopf, module, s, V):
        acc: set = set()
        for t in h.differential(w, module):
            for t2 in h.differential(t, module):
                _toggle(acc, t2)
        if acc:
            return w
    return None


__all__ = [
    "BudgetExceeded", "WindowExhausted", "Eliminator", "gf2_rank", "LambdaMonomial", "lambda_mul",
    "lambda_eta_R", "lambda_tau_product", "CobarWord", "cobar_differential", "cobar_basis",
    "ExtEntry", "ExtChart", "ext_at", "ext_window", "stems", "v_monomial_count", "cotor_e_tau0",
    "cotor_closed_form", "compare_cotor", "ChangeOfRingsReport", "change_of_rings_check",
    "d_squared_zero", "get_hopf", "default_budget",
]
