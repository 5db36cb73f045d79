"""Noncommutative polynomials, a small expression parser, and rewriting to
normal form for the four presented *-algebras (uqsu2, uqmp, podles, bl).

Generators are plain strings ("X", "Y", "Z", "Zi", "T", "K", "Ki", "E", "F")
or pairs ("A", s) for the grading-odd generators of the bl family.  Words are
tuples of generators; a polynomial is a dict word -> complex coefficient.

Rewrite rules are oriented by a weighted graded order (generator weights
below, letter precedence as tie-break) so that every right-hand side is
strictly smaller
than its left-hand word; termination follows, and an iteration cap guards
against implementation bugs.  Confluence is not assumed: normal forms are
certified against the truncated representations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .qcore import QParams, tau

Gen = object  # str or ("A", s)
Word = tuple

PRUNE_DEFAULT = 1e-14
ITERATION_CAP = 10000

_NAMED_GENS = ("X", "Y", "Z", "Zi", "T", "K", "Ki", "E", "F")


def a_gen(s: int) -> Gen:
    return ("A", int(s))


def is_a_gen(g: Gen) -> bool:
    return isinstance(g, tuple) and len(g) == 2 and g[0] == "A"


def gen_name(g: Gen) -> str:
    if is_a_gen(g):
        return f"A({g[1]})"
    return g


def word_name(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        parts.append(gen_name(w[i]) + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "*".join(parts)


class RewriteCapError(RuntimeError):
    """Raised when a reduction exceeds the iteration cap."""


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class NCPoly:
    """Finite complex combination of words in the generators."""

    __slots__ = ("terms",)

    def __init__(self, terms=None, prune: float = PRUNE_DEFAULT):
        self.terms: dict = {}
        if terms:
            for w, c in dict(terms).items():
                c = complex(c)
                if abs(c) > prune:
                    self.terms[tuple(w)] = c

    @staticmethod
    def unit() -> "NCPoly":
        return NCPoly({(): 1.0})

    @staticmethod
    def gen(g: Gen) -> "NCPoly":
        return NCPoly({(g,): 1.0})

    def __add__(self, other: "NCPoly") -> "NCPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0.0) + c
        return NCPoly(out)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0.0) - c
        return NCPoly(out)

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return self.scale(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0.0) + c1 * c2
        return NCPoly(out)

    def __rmul__(self, scalar) -> "NCPoly":
        return self.scale(scalar)

    def scale(self, c) -> "NCPoly":
        return NCPoly({w: v * c for w, v in self.terms.items()})

    def __neg__(self) -> "NCPoly":
        return self.scale(-1.0)

    def __eq__(self, other) -> bool:
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def max_word_len(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def close_to(self, other: "NCPoly", tol: float = 1e-9) -> bool:
        words = set(self.terms) | set(other.terms)
        return all(
            abs(self.terms.get(w, 0.0) - other.terms.get(w, 0.0)) <= tol
            for w in words
        )

    def __repr__(self):
        return f"NCPoly({format_poly(self)})"


# ---------------------------------------------------------------------------
# rules and presentations
# ---------------------------------------------------------------------------

# recipe item: either a generator, or ("zf", sign, n, m) standing for the
# diagonal factor (1 - sign * q^(n + m*x) * Z); a recipe ((c_sign, n, m), items)
# encodes c_sign * q^(n + m*x) * items as an operator product (rightmost item
# acts first).  Recipes let relation checks evaluate product-form right-hand
# sides without expanding them, which matters for conditioning.

def zf(sign: int, n: float, m: int = 0):
    return ("zf", sign, n, m)


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: dict
    name: str
    recipe: Optional[tuple] = None
    exempt: bool = False    # skipped by the order check (e.g. T-elimination)
    defining: bool = True   # False: rewriting aid derived from defining ones


@dataclass(frozen=True)
class Presentation:
    name: str
    generators: tuple
    star_map: dict      # gen -> (sign, word)
    rules: tuple        # ordered by priority
    grading: dict       # gen -> (int degree, parity 0/1)
    params: QParams
    x: Optional[float] = None
    l: Optional[float] = None
    weights: dict = field(default_factory=dict)
    prec: dict = field(default_factory=dict)

    def order_key(self, word: Word):
        wt = sum(self.weights[g] for g in word)
        return (wt, len(word), tuple(self.prec[g] for g in word))

    def rule_for(self, word: Word):
        """First rule (priority order) matching in word, leftmost occurrence."""
        for rule in self.rules:
            L = len(rule.lhs)
            if L > len(word):
                continue
            for i in range(len(word) - L + 1):
                if word[i:i + L] == rule.lhs:
                    return rule, i
        return None


def _weights_and_prec(gens: Iterable[Gen], twol: int = 0) -> tuple[dict, dict]:
    a_weight = 4 * twol + 2
    weights, prec = {}, {}
    for g in gens:
        if is_a_gen(g):
            weights[g] = a_weight
            prec[g] = 500 + g[1]
        else:
            weights[g] = {"Z": 1, "Zi": 1, "K": 1, "Ki": 1}.get(g, 2)
            prec[g] = {"X": 1000, "Y": 990, "T": 400, "Z": 300, "Zi": 290,
                       "K": 200, "Ki": 190, "E": 100, "F": 90}[g]
    return weights, prec


def _check_rules(pres: Presentation):
    for rule in pres.rules:
        lg = grade(rule.lhs, pres)
        for w, c in rule.rhs.items():
            if grade(w, pres) != lg:
                raise AssertionError(f"rule {rule.name} breaks the grading")
        if rule.exempt:
            continue
        lk = pres.order_key(rule.lhs)
        for w in rule.rhs:
            if not pres.order_key(w) < lk:
                raise AssertionError(
                    f"rule {rule.name}: rhs word {word_name(w)} not smaller")


def _zpoly(factors) -> dict:
    """Expand prod (1 - c_j Z) into {Z-degree: coefficient}."""
    poly = {0: 1.0}
    for c in factors:
        out = {}
        for j, v in poly.items():
            out[j] = out.get(j, 0.0) + v
            out[j + 1] = out.get(j + 1, 0.0) - v * c
        poly = out
    return poly


def make_presentation(name: str, p: QParams, x: Optional[float] = None,
                      l=None, extended: bool = False,
                      eliminate_t: bool = False) -> Presentation:
    """Build one of the four presentations with its oriented rule set."""
    q = p.q
    X, Y, Z, Zi, T = "X", "Y", "Z", "Zi", "T"
    if name == "uqsu2":
        gens = ("E", "F", "K", "Ki")
        lam = p.lam
        rules = (
            Rule(("K", "Ki"), {(): 1.0}, "K*Ki"),
            Rule(("Ki", "K"), {(): 1.0}, "Ki*K"),
            Rule(("K", "E"), {("E", "K"): q**2}, "K*E"),
            Rule(("Ki", "E"), {("E", "Ki"): q**-2}, "Ki*E"),
            Rule(("K", "F"), {("F", "K"): q**-2}, "K*F"),
            Rule(("Ki", "F"), {("F", "Ki"): q**2}, "Ki*F"),
            Rule(("E", "F"), {("F", "E"): 1.0, ("K",): lam, ("Ki",): -lam},
                 "E*F"),
        )
        star = {"E": (1, ("Ki", "F")), "F": (1, ("E", "K")),
                "K": (1, ("K",)), "Ki": (1, ("Ki",))}
        grading = {"E": (1, 0), "F": (-1, 0), "K": (0, 0), "Ki": (0, 0)}
        weights, prec = _weights_and_prec(gens)
        pres = Presentation(name, gens, star, rules, grading, p,
                            weights=weights, prec=prec)
        _check_rules(pres)
        return pres

    if name == "uqmp":
        if x is not None:
            raise ValueError("uqmp takes no x; the Casimir T stays symbolic")
        gens = (X, Y, Z, Zi, T)
        rules = []
        if eliminate_t:
            # T is substituted away up front; the XY/YX pair is then replaced
            # by its T-free consequence XY = q^2 YX + (1-q^2)(1+Z^2), since
            # keeping the T-producing rules would cycle.
            rules.append(Rule(
                (T,),
                {(Zi, X, Y): 1 / q, (Zi,): -1 / q, (Zi, Z, Z): q},
                "T", exempt=True, defining=False))
        rules += [
            Rule((Z, Zi), {(): 1.0}, "Z*Zi"),
            Rule((Zi, Z), {(): 1.0}, "Zi*Z"),
            Rule((X, Z), {(Z, X): q**2}, "X*Z"),
            Rule((Y, Z), {(Z, Y): q**-2}, "Y*Z"),
            Rule((X, Zi), {(Zi, X): q**-2}, "X*Zi", defining=False),
            Rule((Y, Zi), {(Zi, Y): q**2}, "Y*Zi", defining=False),
        ]
        if eliminate_t:
            rules.append(Rule(
                (X, Y),
                {(Y, X): q**2, (): 1 - q**2, (Z, Z): 1 - q**2},
                "X*Y", defining=False))
        else:
            rules += [
                Rule((T, Z), {(Z, T): 1.0}, "T*Z", defining=False),
                Rule((T, Zi), {(Zi, T): 1.0}, "T*Zi", defining=False),
                Rule((X, T), {(T, X): 1.0}, "X*T", defining=False),
                Rule((Y, T), {(T, Y): 1.0}, "Y*T", defining=False),
                Rule((X, Y), {(): 1.0, (T, Z): q, (Z, Z): -(q**2)}, "X*Y"),
                Rule((Y, X), {(): 1.0, (T, Z): 1 / q, (Z, Z): -(q**-2)},
                     "Y*X"),
            ]
        star = {X: (1, (Y,)), Y: (1, (X,)), Z: (1, (Z,)),
                Zi: (1, (Zi,)), T: (1, (T,))}
        grading = {X: (-1, 0), Y: (1, 0), Z: (0, 0), Zi: (0, 0), T: (0, 0)}
        weights, prec = _weights_and_prec(gens)
        pres = Presentation(name, gens, star, tuple(rules), grading, p,
                            weights=weights, prec=prec)
        _check_rules(pres)
        return pres

    if name == "podles":
        if x is None or not math.isfinite(x):
            raise ValueError("podles needs a finite real x")
        t = tau(p, x)
        gens = (X, Y, Z) + ((Zi,) if extended else ())
        rules = []
        if extended:
            rules += [
                Rule((Z, Zi), {(): 1.0}, "Z*Zi"),
                Rule((Zi, Z), {(): 1.0}, "Zi*Z"),
                Rule((X, Zi), {(Zi, X): q**-2}, "X*Zi", defining=False),
                Rule((Y, Zi), {(Zi, Y): q**2}, "Y*Zi", defining=False),
            ]
        rules += [
            Rule((X, Z), {(Z, X): q**2}, "X*Z"),
            Rule((Y, Z), {(Z, Y): q**-2}, "Y*Z"),
            Rule((X, Y), {(): 1.0, (Z,): q * t, (Z, Z): -(q**2)}, "X*Y",
                 recipe=((1, 0, 0), (zf(1, 1, 1), zf(-1, 1, -1)))),
            Rule((Y, X), {(): 1.0, (Z,): t / q, (Z, Z): -(q**-2)}, "Y*X",
                 recipe=((1, 0, 0), (zf(1, -1, 1), zf(-1, -1, -1)))),
        ]
        star = {X: (1, (Y,)), Y: (1, (X,)), Z: (1, (Z,))}
        if extended:
            star[Zi] = (1, (Zi,))
        grading = {X: (-1, 0), Y: (1, 0), Z: (0, 0), Zi: (0, 0)}
        weights, prec = _weights_and_prec(gens)
        pres = Presentation(name, gens, star, tuple(rules), grading, p, x=x,
                            weights=weights, prec=prec)
        _check_rules(pres)
        return pres

    if name == "bl":
        if l is None or l < 0 or (2 * l) != int(2 * l):
            raise ValueError(f"bl needs l a nonnegative half-integer, got {l}")
        twol = int(2 * l)
        t = tau(p, twol)
        a_list = [a_gen(s) for s in range(-twol, twol + 1)]
        gens = (X, Y, Z) + tuple(a_list)
        rules = [
            Rule((X, Z), {(Z, X): q**2}, "X*Z"),
            Rule((Y, Z), {(Z, Y): q**-2}, "Y*Z"),
        ]
        for s in range(-twol, twol + 1):
            A = a_gen(s)
            rules.append(Rule(
                (A, Z), {(Z, A): -(q ** (-2 * s))}, f"A({s})*Z",
                recipe=((-1, -2 * s, 0), (Z, A))))
        rules += [
            Rule((X, Y), {(): 1.0, (Z,): q * t, (Z, Z): -(q**2)}, "X*Y",
                 recipe=((1, 0, 0), (zf(1, twol + 1, 0), zf(-1, -twol + 1, 0)))),
            Rule((Y, X), {(): 1.0, (Z,): t / q, (Z, Z): -(q**-2)}, "Y*X",
                 recipe=((1, 0, 0), (zf(1, twol - 1, 0), zf(-1, -twol - 1, 0)))),
        ]
        for s in range(-twol, twol + 1):
            A, Am, Ap = a_gen(s), a_gen(s - 1), a_gen(s + 1)
            if s > -twol:
                e = 2 * s + twol - 1
                rules.append(Rule(
                    (X, A), {(Am,): -1.0, (Am, Z): -(q**e)}, f"X*A({s})",
                    recipe=((-1, 0, 0), (Am, zf(-1, e, 0)))))
            else:
                rules.append(Rule((X, A), {(A, X): -1.0}, f"X*A({s})",
                                  recipe=((-1, 0, 0), (A, X))))
            if s < twol:
                e = 2 * s - twol + 1
                rules.append(Rule(
                    (Y, A), {(Ap,): -1.0, (Ap, Z): q**e}, f"Y*A({s})",
                    recipe=((-1, 0, 0), (Ap, zf(1, e, 0)))))
            else:
                rules.append(Rule((Y, A), {(A, Y): -1.0}, f"Y*A({s})",
                                  recipe=((-1, 0, 0), (A, Y))))
            # starred companions, moving A to the front of X/Y powers
            if s > -twol:
                e = -2 * s - twol + 1
                rules.append(Rule(
                    (A, X), {(Am,): 1.0, (Z, Am): -(q**e)}, f"A({s})*X",
                    recipe=((1, 0, 0), (zf(1, e, 0), Am))))
            if s < twol:
                e = -2 * s + twol - 1
                rules.append(Rule(
                    (A, Y), {(Ap,): 1.0, (Z, Ap): q**e}, f"A({s})*Y",
                    recipe=((1, 0, 0), (zf(-1, e, 0), Ap))))
        for s in range(-twol, twol + 1):
            for sp in range(-twol, twol + 1):
                A, Ap = a_gen(s), a_gen(sp)
                sign = -1.0 if s % 2 else 1.0
                if s + sp <= 0:
                    head, m = X, -(s + sp)
                    exps1 = [2 * sp - twol + 1 + 2 * j for j in range(s + twol)]
                    exps2 = [-twol + 1 + 2 * j for j in range(sp + twol)]
                else:
                    head, m = Y, s + sp
                    exps1 = [2 * sp - twol + 1 + 2 * j for j in range(twol - sp)]
                    exps2 = [2 * s + 2 * sp - twol + 1 + 2 * j
                             for j in range(twol - s)]
                zcoeffs = _zpoly([q**e for e in exps1]
                                 + [-(q**e) for e in exps2])
                rhs = {}
                for j, c in zcoeffs.items():
                    w = (head,) * m + (Z,) * j
                    rhs[w] = sign * c
                items = tuple([head] * m
                              + [zf(1, e, 0) for e in exps1]
                              + [zf(-1, e, 0) for e in exps2])
                rules.append(Rule(
                    (A, Ap), rhs, f"A({s})*A({sp})",
                    recipe=((int(sign), 0, 0), items)))
        star = {X: (1, (Y,)), Y: (1, (X,)), Z: (1, (Z,))}
        for s in range(-twol, twol + 1):
            star[a_gen(s)] = ((-1) ** s, (a_gen(-s),))
        grading = {X: (-1, 0), Y: (1, 0), Z: (0, 0)}
        for s in range(-twol, twol + 1):
            grading[a_gen(s)] = (s, 1)
        weights, prec = _weights_and_prec(gens, twol)
        pres = Presentation(name, gens, star, tuple(rules), grading, p, l=l,
                            weights=weights, prec=prec)
        _check_rules(pres)
        return pres

    raise ValueError(f"unknown presentation {name!r}")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def normal_form(poly: NCPoly, pres: Presentation,
                cap: int = ITERATION_CAP) -> NCPoly:
    """Reduce until no rule applies.

    Deterministic strategy: largest reducible word first; within a word,
    rules in priority order, leftmost occurrence.
    """
    terms = dict(poly.terms)
    steps = 0
    while True:
        hit = None
        for w in sorted(terms, key=pres.order_key, reverse=True):
            found = pres.rule_for(w)
            if found is not None:
                hit = (w, *found)
                break
        if hit is None:
            return NCPoly(terms)
        w, rule, i = hit
        steps += 1
        if steps > cap:
            raise RewriteCapError(
                f"iteration cap {cap} exceeded in {pres.name} "
                f"(stuck near {word_name(w)})")
        c = terms.pop(w)
        pre, suf = w[:i], w[i + len(rule.lhs):]
        for rw, rc in rule.rhs.items():
            nw = pre + rw + suf
            nc = terms.get(nw, 0.0) + c * rc
            if abs(nc) > PRUNE_DEFAULT:
                terms[nw] = nc
            elif nw in terms:
                del terms[nw]


def star(poly: NCPoly, pres: Presentation) -> NCPoly:
    """Reverse words, star each generator, conjugate coefficients."""
    out: dict = {}
    for w, c in poly.terms.items():
        sign = 1
        letters: list = []
        for g in reversed(w):
            s, gw = pres.star_map[g]
            sign *= s
            letters.extend(gw)
        nw = tuple(letters)
        out[nw] = out.get(nw, 0.0) + sign * c.conjugate()
    return NCPoly(out)


def grade(word: Word, pres: Presentation) -> tuple[int, int]:
    d = par = 0
    for g in word:
        gd, gp = pres.grading[g]
        d += gd
        par ^= gp
    return (d, par)


_SIGMA_GENS = {"X", "Y", "Z", "Zi", "T"}


def sigma(poly: NCPoly) -> NCPoly:
    """Generator-wise sign flip on X, Y, Z, Zi, T (multiplicative extension)."""
    out = {}
    for w, c in poly.terms.items():
        for g in w:
            if g not in _SIGMA_GENS:
                raise ValueError(f"sigma undefined on generator {gen_name(g)}")
        out[w] = c * ((-1) ** len(w))
    return NCPoly(out)


# ---------------------------------------------------------------------------
# parser / formatter
# ---------------------------------------------------------------------------

def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            toks.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            try:
                val = float(text[i:j])
            except ValueError:
                raise ParseError(f"bad number {text[i:j]!r}", i) from None
            if j < n and text[j] == "i":
                toks.append(("num", complex(0.0, val), i))
                j += 1
            else:
                toks.append(("num", complex(val, 0.0), i))
            i = j
            continue
        if ch == "q":
            toks.append(("q", "q", i))
            i += 1
            continue
        if ch == "A":
            j = i + 1
            if j >= n or text[j] != "(":
                raise ParseError("expected '(' after A", i)
            j += 1
            k = j
            if k < n and text[k] in "+-":
                k += 1
            while k < n and text[k].isdigit():
                k += 1
            if k == j or k >= n or text[k] != ")":
                raise ParseError("expected A(<signed integer>)", i)
            toks.append(("gen", a_gen(int(text[j:k])), i))
            i = k + 1
            continue
        if ch.isalpha():
            two = text[i:i + 2]
            if two in ("Zi", "Ki"):
                toks.append(("gen", two, i))
                i += 2
                continue
            if ch in "XYZTKEF":
                toks.append(("gen", ch, i))
                i += 1
                continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, toks, pres: Presentation):
        self.toks = toks
        self.pos = 0
        self.pres = pres

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, got {tok[0]!r}", tok[2])
        self.pos += 1
        return tok

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        elif self.peek()[0] == "+":
            self.take()
        kind, val, at = self.take("num")
        if val.imag != 0 or val.real != int(val.real):
            raise ParseError("exponent must be an integer", at)
        return sign * int(val.real)

    def expr(self) -> NCPoly:
        sign = 1.0
        if self.peek()[0] in ("+", "-"):
            sign = -1.0 if self.take()[0] == "-" else 1.0
        out = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> NCPoly:
        out = self.factor()
        while self.peek()[0] == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> NCPoly:
        kind, val, at = self.peek()
        if kind == "num":
            self.take()
            return NCPoly({(): val})
        if kind == "q":
            self.take()
            e = 1
            if self.peek()[0] == "^":
                self.take()
                e = self.signed_int()
            return NCPoly({(): self.pres.params.q ** e})
        if kind == "gen":
            self.take()
            if val not in self.pres.generators:
                raise ParseError(
                    f"unknown generator {gen_name(val)} for {self.pres.name}", at)
            e = 1
            if self.peek()[0] == "^":
                self.take()
                e = self.signed_int()
                if e < 0:
                    raise ParseError("generator powers must be nonnegative", at)
            return NCPoly({(val,) * e: 1.0})
        if kind == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        raise ParseError(f"unexpected token {kind!r}", at)


def parse(text: str, pres: Presentation) -> NCPoly:
    """Parse an expression over the presentation's generators."""
    parser = _Parser(_tokenize(text), pres)
    out = parser.expr()
    parser.take("end")
    return out


def format_poly(poly: NCPoly, pres: Optional[Presentation] = None) -> str:
    """Render a polynomial; format_poly . parse is the identity on values."""
    if poly.is_zero():
        return "0"
    key = pres.order_key if pres is not None else (lambda w: (len(w), str(w)))
    pieces = []
    for w in sorted(poly.terms, key=key, reverse=True):
        c = poly.terms[w]
        for val, suffix in ((c.real, ""), (c.imag, "i")):
            if val == 0.0:
                continue
            coeff = f"{abs(val)!r}{suffix}"
            body = coeff if not w else f"{coeff}*{word_name(w)}"
            pieces.append(("- " if val < 0 else "+ ") + body)
    out = " ".join(pieces)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


# ---------------------------------------------------------------------------
# word sampling and basis enumeration
# ---------------------------------------------------------------------------

class LCG:
    """Deterministic 32-bit linear congruential generator.

    state <- (1664525 * state + 1013904223) mod 2^32.  Used for all seeded
    sampling so that reports are reproducible across platforms.
    """

    def __init__(self, seed: int = 0):
        self.state = seed & 0xFFFFFFFF

    def next(self) -> int:
        self.state = (1664525 * self.state + 1013904223) & 0xFFFFFFFF
        return self.state

    def below(self, n: int) -> int:
        return self.next() % n


def random_words(pres: Presentation, count: int, maxlen: int,
                 seed: int = 0) -> list[Word]:
    rng = LCG(seed)
    gens = pres.generators
    out = []
    for _ in range(count):
        length = 1 + rng.below(maxlen)
        out.append(tuple(gens[rng.below(len(gens))] for _ in range(length)))
    return out


def basis_words(pres: Presentation, max_degree: int) -> list[Word]:
    """Normal-form basis monomials of total degree <= max_degree."""
    X, Y, Z = "X", "Y", "Z"
    words = set()
    if pres.name == "podles":
        for n in range(max_degree + 1):
            for m in range(max_degree - n + 1):
                words.add((Z,) * n + (X,) * m)
                words.add((Z,) * n + (Y,) * m)
    elif pres.name == "bl":
        twol = int(2 * pres.l)
        for n in range(max_degree + 1):
            for m in range(max_degree - n + 1):
                words.add((Z,) * n + (X,) * m)
                words.add((Z,) * n + (Y,) * m)
            if n < max_degree:
                for s in range(-twol, twol + 1):
                    words.add((Z,) * n + (a_gen(s),))
                for m in range(1, max_degree - n):
                    words.add((Z,) * n + (a_gen(-twol),) + (X,) * m)
                    words.add((Z,) * n + (a_gen(twol),) + (Y,) * m)
    else:
        raise ValueError(f"no basis enumeration for {pres.name}")
    return sorted(words, key=pres.order_key)


def is_basis_word(word: Word, pres: Presentation) -> bool:
    """Membership in the normal-form monomial basis (structural test)."""
    i = 0
    while i < len(word) and word[i] in ("Z", "Zi"):
        i += 1
    if any(g in ("Z", "Zi") for g in word[i:]):
        return False
    rest = word[i:]
    if pres.name == "uqmp":
        while rest and rest[0] == "T":
            rest = rest[1:]
    if not rest:
        return True
    if pres.name in ("podles", "uqmp"):
        return all(g == rest[0] for g in rest) and rest[0] in ("X", "Y")
    if pres.name == "bl":
        twol = int(2 * pres.l)
        if is_a_gen(rest[0]):
            s, tail = rest[0][1], rest[1:]
            if any(is_a_gen(g) for g in tail):
                return False
            if not tail:
                return True
            if all(g == "X" for g in tail):
                return s == -twol
            if all(g == "Y" for g in tail):
                return s == twol
            return False
        return all(g == rest[0] for g in rest) and rest[0] in ("X", "Y")
    raise ValueError(f"no basis test for {pres.name}")
