"""Free-group words: parsing, reduction, evaluation and symbolic series.

Grammar for word text:

    word    :=  factor*
    factor  :=  atom [ '^' integer ]
    atom    :=  'x' index  |  '(' word ')'  |  '[' word ',' word ']'

``[u,v]`` is the commutator u^-1 v^-1 u v.  Words are stored freely
reduced; the generator count k is the highest index mentioned in the text,
even when that generator cancels away.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EnumerationBoundError, WordSyntaxError
from .fgl import FormalGroupLaw
from .series import SeriesTuple, compose
from .stdgrp import default_bound


def _reduce(letters) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for gen, sign in letters:
        if out and out[-1][0] == gen and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((gen, sign))
    return tuple(out)


@dataclass(frozen=True)
class WordExpr:
    """A freely reduced word in the free group on x1..xk."""

    k: int
    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("words need at least one generator")
        for gen, sign in self.letters:
            if not 1 <= gen <= self.k or sign not in (1, -1):
                raise ValueError(f"bad letter ({gen}, {sign})")

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> WordExpr:
        return WordExpr(self.k, tuple((g, -s) for g, s in reversed(self.letters)))

    def __mul__(self, other: WordExpr) -> WordExpr:
        return WordExpr(max(self.k, other.k), _reduce(self.letters + other.letters))

    def power(self, n: int) -> WordExpr:
        if n < 1:
            raise ValueError("word powers take n >= 1")
        return WordExpr(self.k, _reduce(self.letters * n))

    def evaluate(self, group, args):
        """Left fold of the word over any group exposing identity/mul/inv."""
        if len(args) < self.k:
            raise ValueError(f"word mentions x{self.k} but only {len(args)} arguments given")
        acc = group.identity
        for gen, sign in self.letters:
            v = args[gen - 1]
            acc = group.mul(acc, v if sign > 0 else group.inv(v))
        return acc

    def text(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for gen, sign in self.letters:
            if parts and parts[-1][0] == (gen, sign):
                parts[-1][1] += 1
            else:
                parts.append([(gen, sign), 1])
        out = []
        for (gen, sign), n in parts:
            e = sign * n
            out.append(f"x{gen}" if e == 1 else f"x{gen}^{e}")
        return " ".join(out)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise WordSyntaxError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t*·":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def atom(self):
        ch = self.peek()
        if ch == "x":
            self.pos += 1
            if not self.peek().isdigit():
                self.error("expected a generator index after 'x'")
            idx = self.integer()
            if idx < 1:
                self.error("generator indices start at 1")
            return [(idx, 1)], idx
        if ch == "(":
            self.pos += 1
            letters, k = self.word()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return letters, k
        if ch == "[":
            self.pos += 1
            u, ku = self.word()
            if self.peek() != ",":
                self.error("expected ',' inside commutator")
            self.pos += 1
            v, kv = self.word()
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            inv = lambda ls: [(g, -s) for g, s in reversed(ls)]
            return inv(u) + inv(v) + u + v, max(ku, kv)
        self.error("expected a generator, '(' or '['")

    def factor(self):
        letters, k = self.atom()
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            n = self.integer()
            if n == 0:
                letters = []
            elif n < 0:
                letters = [(g, -s) for g, s in reversed(letters)] * (-n)
            else:
                letters = letters * n
        return letters, k

    def word(self):
        # closers are consumed by whichever construct opened them
        letters: list[tuple[int, int]] = []
        k = 0
        self.skip_ws()
        while self.pos < len(self.text) and self.peek() not in ")],":
            ls, kk = self.factor()
            letters += ls
            k = max(k, kk)
            self.skip_ws()
        return letters, k


def parse_word(text: str) -> WordExpr:
    parser = _Parser(text)
    letters, k = parser.word()
    if parser.pos < len(text):
        parser.error(f"unexpected character {text[parser.pos]!r}")
    if k == 0:
        parser.error("empty word text")
    return WordExpr(k, _reduce(letters))


# --------------------------------------------------------------------------
# symbolic word series


@dataclass(frozen=True)
class WordSeries:
    word: WordExpr
    d: int
    W: SeriesTuple


def word_series(w: WordExpr, law: FormalGroupLaw) -> WordSeries:
    """Fold the law over the word: d series in d*k variables, one block of d
    per generator, with W(0) = 0."""
    d, spec, D = law.d, law.spec, law.D
    nv = d * w.k
    acc = SeriesTuple.zeros(spec, d, nv, D)
    for gen, sign in w.letters:
        block = SeriesTuple.block(spec, nv, D, (gen - 1) * d, d)
        arg = block if sign > 0 else compose(law.I, block)
        acc = compose(law.F, acc.concat(arg))
    return WordSeries(w, d, acc)


# --------------------------------------------------------------------------
# image, verbal and marginal subgroups on finite group handles


def _tuple_guard(size: int, bound: int | None) -> int:
    bound = default_bound() if bound is None else bound
    if size > bound:
        raise EnumerationBoundError(size, bound)
    return bound


def word_image(w: WordExpr, group, bound: int | None = None) -> set:
    """w{G} = all word values over a finite group handle."""
    n = len(group.elements)
    _tuple_guard(n**w.k, bound)
    out = set()
    for args in itertools.product(group.elements, repeat=w.k):
        out.add(w.evaluate(group, args))
    return out

def verbal_subgroup(w: WordExpr, group, bound: int | None = None) -> set:
    """The subgroup generated by the word image."""
    image = word_image(w, group, bound)
    gens = set(image) | {group.inv(g) for g in image}
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = group.mul(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def marginal_subgroup(w: WordExpr, group, bound: int | None = None) -> set:
    """Elements g with w(.., g*x_i, ..) = w(.., x_i, ..) in every slot, always."""
    n = len(group.elements)
    _tuple_guard(n ** (w.k + 1), bound)
    out = set()
    for g in group.elements:
        ok = True
        for args in itertools.product(group.elements, repeat=w.k):
            base = w.evaluate(group, args)
            for i in range(w.k):
                shifted = list(args)
                shifted[i] = group.mul(g, args[i])
                if w.evaluate(group, shifted) != base:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(g)
    return out
