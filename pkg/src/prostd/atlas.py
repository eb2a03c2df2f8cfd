"""Transversal extensions: a finite chart group T acting on a standard group.

An extension H is stored as T x L with three pieces of series data over the
law of L:

* ``C``: for each t in T, the conjugation series of t on L (an automorphism
  of the law);
* ``A``: chart-correction series indexed by a pair context, either
  ``("mul", t, r)`` for the product t*r or ``("inv", t)`` for t^-1, with the
  target representative taken from the coset table; missing keys mean the
  identity correction (the split case).  All corrections have zero constant
  term, so transversal representatives multiply exactly to representatives.

The group operation and its symbolic shadow are

    (t, l) * (r, m) = (t·r, A_mul[t,r](F(C_r(l), m)))
    (t, l)^-1       = (t^-1, A_inv[t](C_{t^-1}(I(l))))

and a word w with arguments constrained to cosets (t_1, .., t_k) folds to
one series per coset tuple, exactly as the product formula iterates.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import EnumerationBoundError, ExtensionDataError, ShapeError
from .fgl import FormalGroupLaw
from .rings import Coefficient, RingSpec, random_ideal_element
from .series import Series, SeriesTuple, compose, constancy
from .stdgrp import StandardGroup, default_bound
from .words import WordExpr, WordSeries


@dataclass(frozen=True, eq=False)
class CosetTable:
    """A small finite group on string labels, given by explicit tables."""

    elements: tuple[str, ...]
    identity: str
    mul: dict
    inv: dict

    def __post_init__(self):
        object.__setattr__(self, "mul", dict(self.mul))
        object.__setattr__(self, "inv", dict(self.inv))

    def check(self):
        els = self.elements
        if len(set(els)) != len(els):
            raise ExtensionDataError("duplicate coset labels")
        if self.identity not in els:
            raise ExtensionDataError("identity label missing from the elements")
        for t, r in itertools.product(els, repeat=2):
            if self.mul.get((t, r)) not in els:
                raise ExtensionDataError(f"multiplication table incomplete at ({t}, {r})")
        for t in els:
            if self.mul[(self.identity, t)] != t or self.mul[(t, self.identity)] != t:
                raise ExtensionDataError(f"identity fails at {t}")
            if self.inv.get(t) not in els:
                raise ExtensionDataError(f"inverse table incomplete at {t}")
            if self.mul[(t, self.inv[t])] != self.identity or \
               self.mul[(self.inv[t], t)] != self.identity:
                raise ExtensionDataError(f"inverse fails at {t}")
        for t, r, q in itertools.product(els, repeat=3):
            if self.mul[(self.mul[(t, r)], q)] != self.mul[(t, self.mul[(r, q)])]:
                raise ExtensionDataError(
                    f"coset table is not associative at ({t}, {r}, {q})")
        return self


def coset_table(elements, identity, mul, inv, check: bool = True) -> CosetTable:
    table = CosetTable(tuple(elements), identity, mul, inv)
    return table.check() if check else table


def cyclic_table(n: int) -> CosetTable:
    """C_n with labels 1, s, s2, .., s{n-1}."""
    labels = ["1"] + [f"s{i}" if i > 1 else "s" for i in range(1, n)]
    mul = {}
    for i, j in itertools.product(range(n), repeat=2):
        mul[(labels[i], labels[j])] = labels[(i + j) % n]
    inv = {labels[i]: labels[(-i) % n] for i in range(n)}
    return coset_table(labels, labels[0], mul, inv)


@dataclass(frozen=True)
class HElement:
    t: str
    coords: tuple[Coefficient, ...]

    def __str__(self) -> str:
        return f"({self.t}; " + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True, eq=False)
class TransversalData:
    L: StandardGroup
    T: CosetTable
    C: dict = field(default_factory=dict)
    A: dict = field(default_factory=dict)
    split: bool = True

    def __post_init__(self):
        d, spec, D = self.L.d, self.L.law.spec, self.L.law.D
        if set(self.C) != set(self.T.elements):
            raise ExtensionDataError("conjugation series must cover exactly T")
        for t, S in self.C.items():
            _check_chart_series(S, d, spec, D, f"C[{t}]")
        for key, S in self.A.items():
            if not (isinstance(key, tuple) and key and key[0] in ("mul", "inv")):
                raise ExtensionDataError(f"bad correction key {key!r}")
            labels = key[1:]
            if any(x not in self.T.elements for x in labels) or \
               len(labels) != (2 if key[0] == "mul" else 1):
                raise ExtensionDataError(f"bad correction key {key!r}")
            _check_chart_series(S, d, spec, D, f"A[{key}]")
        if self.split and self.A:
            raise ExtensionDataError("split data must not carry corrections")

    # -- chart-series accessors ---------------------------------------------

    def correction(self, key) -> SeriesTuple | None:
        return self.A.get(key)

    def _apply_correction(self, key, coords):
        S = self.A.get(key)
        return coords if S is None else S.evaluate(coords)

    # -- group operations ----------------------------------------------------

    @property
    def identity(self) -> HElement:
        zero = Coefficient.zero(self.L.law.spec)
        return HElement(self.T.identity, (zero,) * self.L.d)

    def element(self, t: str, coords) -> HElement:
        if t not in self.T.elements:
            raise ExtensionDataError(f"unknown coset label {t!r}")
        return HElement(t, self.L.element(coords).coords)

    def mul(self, x: HElement, y: HElement) -> HElement:
        law = self.L.law
        v = self.C[y.t].evaluate(x.coords)
        v = law.F.evaluate(v + y.coords)
        v = self._apply_correction(("mul", x.t, y.t), v)
        return HElement(self.T.mul[(x.t, y.t)], v)

    def inv(self, x: HElement) -> HElement:
        law = self.L.law
        r = self.T.inv[x.t]
        v = law.I.evaluate(x.coords)
        v = self.C[r].evaluate(v)
        v = self._apply_correction(("inv", x.t), v)
        return HElement(r, v)

    def map_coefficients(self, phi) -> TransversalData:
        """Transport the whole chart along a coefficient map, then revalidate."""
        law = self.L.law.map_coefficients(phi)
        data = TransversalData(
            L=StandardGroup(law, self.L.N),
            T=self.T,
            C={t: S.map_coefficients(phi) for t, S in self.C.items()},
            A={k: S.map_coefficients(phi) for k, S in self.A.items()},
            split=self.split,
        )
        report = validate_transversal(data, samples=32, seed=7)
        if not report.ok:
            raise ExtensionDataError(f"transported data fails validation: {report.failures[0]}")
        return data


def _check_chart_series(S: SeriesTuple, d: int, spec: RingSpec, D: int, name: str):
    if not isinstance(S, SeriesTuple) or len(S) != d or S.nvars != d:
        raise ExtensionDataError(f"{name} must be {d} series in {d} variables")
    if S.spec != spec or S.D != D:
        raise ExtensionDataError(f"{name} disagrees with the law's ring or truncation")
    if not S.has_zero_constant_terms():
        raise ExtensionDataError(f"{name} must have zero constant terms")


def _identity_series(spec: RingSpec, d: int, D: int) -> SeriesTuple:
    return SeriesTuple.block(spec, d, D, 0, d)


def split_extension(L: StandardGroup, T: CosetTable, action: dict) -> TransversalData:
    """Build split data from a T-action by law automorphisms.

    Checks symbolically that each C_t respects the law, that C_1 is the
    identity, and that C_q(C_r(X)) = C_{rq}(X) (conjugation composes as a
    right action).
    """
    d, spec, D = L.d, L.law.spec, L.law.D
    law = L.law
    if set(action) != set(T.elements):
        raise ExtensionDataError("action must assign a series tuple to every coset")
    for t, S in action.items():
        _check_chart_series(S, d, spec, D, f"action[{t}]")
    ident = _identity_series(spec, d, D)
    if action[T.identity] != ident:
        raise ExtensionDataError("action of the identity coset must be the identity series")
    x_blk = SeriesTuple.block(spec, 2 * d, D, 0, d)
    y_blk = SeriesTuple.block(spec, 2 * d, D, d, d)
    for t, S in action.items():
        lhs = compose(S, law.F)
        rhs = compose(law.F, compose(S, x_blk).concat(compose(S, y_blk)))
        diff = lhs - rhs
        bad = constancy(diff)
        if not bad.constant or any(not c.is_zero for c in bad.constants):
            raise ExtensionDataError(
                f"action[{t}] fails the automorphism check, witness {bad.witness_name()}")
    for t, r in itertools.product(T.elements, repeat=2):
        lhs = compose(action[t], action[r])
        rhs = action[T.mul[(r, t)]]
        diff = lhs - rhs
        bad = constancy(diff)
        if not bad.constant or any(not c.is_zero for c in bad.constants):
            raise ExtensionDataError(
                f"action is incompatible at ({t}, {r}), witness {bad.witness_name()}")
    return TransversalData(L=L, T=T, C=dict(action), A={}, split=True)


def direct_product(L: StandardGroup, T: CosetTable) -> TransversalData:
    ident = _identity_series(L.law.spec, L.d, L.law.D)
    return split_extension(L, T, {t: ident for t in T.elements})


def inversion_extension(L: StandardGroup) -> TransversalData:
    """C_2 acting by the formal inverse (an automorphism for abelian laws)."""
    T = cyclic_table(2)
    ident = _identity_series(L.law.spec, L.d, L.law.D)
    return split_extension(L, T, {"1": ident, "s": L.law.I})


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    mode: str
    checked: int
    failures: tuple[str, ...]

    def to_json(self) -> dict:
        return {"ok": self.ok, "mode": self.mode, "checked": self.checked,
                "failures": list(self.failures)}


def _structural_failures(data: TransversalData) -> list[str]:
    out = []
    try:
        data.T.check()
    except ExtensionDataError as e:
        out.append(f"coset table: {e}")
    d, spec, D = data.L.d, data.L.law.spec, data.L.law.D
    if data.C.get(data.T.identity) != _identity_series(spec, d, D):
        out.append("C[identity] is not the identity series")
    return out


def _pointwise_failures(data: TransversalData, triples, limit: int = 3) -> list[str]:
    out = []
    e = data.identity
    seen_elements = set()
    for x, y, z in triples:
        seen_elements.update((x, y, z))
        left = data.mul(data.mul(x, y), z)
        right = data.mul(x, data.mul(y, z))
        if left != right:
            out.append(f"associativity fails at ({x}, {y}, {z})")
            if len(out) >= limit:
                return out
    for x in seen_elements:
        if data.mul(e, x) != x or data.mul(x, e) != x:
            out.append(f"identity fails at {x}")
        ix = data.inv(x)
        if data.mul(x, ix) != e or data.mul(ix, x) != e:
            out.append(f"inverse fails at {x}")
        if len(out) >= limit:
            return out
    return out


def validate_transversal(data: TransversalData, level: int | None = None,
                         samples: int | None = None, seed: int = 0,
                         bound: int | None = None) -> ValidationReport:
    """Check the group axioms: exhaustively on a finite quotient when
    ``level`` is given (default policy: level N+2 when small enough),
    otherwise on pseudo-random triples."""
    failures = _structural_failures(data)
    mode = "structural"
    checked = 0
    if failures:
        return ValidationReport(False, mode, checked, tuple(failures))
    bound = default_bound() if bound is None else bound
    if level is None and samples is None:
        level = data.L.N + 2
        try:
            hq = extension_quotient(data, level, bound)
            if len(hq) ** 3 > min(bound, 50**3):
                level, hq = None, None
        except (EnumerationBoundError, ValueError):
            level, hq = None, None
        if level is None:
            samples = 1000
    elif level is not None:
        hq = extension_quotient(data, level, bound)
        if len(hq) ** 3 > bound:
            raise EnumerationBoundError(len(hq) ** 3, bound)
    if level is not None:
        mode = f"exhaustive level {level}"
        checked = len(hq) ** 3
        failures += _pointwise_quotient_failures(hq)
    else:
        rng = random.Random(seed)
        spec, d = data.L.law.spec, data.L.d
        triples = []
        for _ in range(samples):
            triple = tuple(
                HElement(rng.choice(data.T.elements),
                         tuple(random_ideal_element(spec, data.L.N, rng) for _ in range(d)))
                for _ in range(3))
            triples.append(triple)
        mode = f"sampled {samples}"
        checked = samples
        failures += _pointwise_failures(data, triples)
    return ValidationReport(not failures, mode, checked, tuple(failures))


def _pointwise_quotient_failures(hq, limit: int = 3) -> list[str]:
    def fmt(x):
        return str(HElement(x[0], x[1]))

    out = []
    els = hq.elements
    e = hq.identity
    for x, y, z in itertools.product(els, repeat=3):
        if hq.mul(hq.mul(x, y), z) != hq.mul(x, hq.mul(y, z)):
            out.append(f"associativity fails at ({fmt(x)}, {fmt(y)}, {fmt(z)})")
            if len(out) >= limit:
                return out
    for x in els:
        if hq.mul(e, x) != x or hq.mul(x, e) != x:
            out.append(f"identity fails at {fmt(x)}")
        ix = hq.inv(x)
        if hq.mul(x, ix) != e or hq.mul(ix, x) != e:
            out.append(f"inverse fails at {fmt(x)}")
        if len(out) >= limit:
            return out
    return out


class HQuotient:
    """Finite handle on T x (quotient of L mod m^M)."""

    def __init__(self, data: TransversalData, M: int, bound: int | None = None):
        bound = default_bound() if bound is None else bound
        lq = data.L.quotient(M, bound)
        size = len(data.T.elements) * len(lq)
        if size > bound:
            raise EnumerationBoundError(size, bound)
        self.data = data
        self.M = M
        self._lq = lq
        self.elements = [(t, coords) for t in data.T.elements for coords in lq.elements]
        self.identity = (data.T.identity, lq.identity)

    def __len__(self):
        return len(self.elements)

    def _reduce(self, h: HElement):
        return (h.t, tuple(c.mod_ideal_power(self.M) for c in h.coords))

    def mul(self, x, y):
        return self._reduce(self.data.mul(HElement(*x), HElement(*y)))

    def inv(self, x):
        return self._reduce(self.data.inv(HElement(*x)))


def extension_quotient(data: TransversalData, M: int, bound: int | None = None) -> HQuotient:
    return HQuotient(data, M, bound)


# --------------------------------------------------------------------------
# coset-constrained word series


@dataclass(frozen=True)
class CosetWordSeries:
    word: WordExpr
    cosets: tuple[str, ...]
    target: str
    W: SeriesTuple


def coset_word_series(w: WordExpr, data: TransversalData,
                      cosets: tuple[str, ...]) -> CosetWordSeries:
    """Symbolic word map with argument i constrained to the coset of
    cosets[i-1]; returns the target coset and d series in d*k variables."""
    if len(cosets) != w.k:
        raise ShapeError(f"word mentions x{w.k}, so {w.k} cosets are required")
    for t in cosets:
        if t not in data.T.elements:
            raise ExtensionDataError(f"unknown coset label {t!r}")
    law = data.L.law
    d, spec, D = law.d, law.spec, law.D
    nv = d * w.k
    cur = data.T.identity
    acc = SeriesTuple.zeros(spec, d, nv, D)
    for gen, sign in w.letters:
        block = SeriesTuple.block(spec, nv, D, (gen - 1) * d, d)
        if sign > 0:
            r = cosets[gen - 1]
            u = block
        else:
            t = cosets[gen - 1]
            r = data.T.inv[t]
            u = compose(data.C[r], compose(law.I, block))
            corr = data.correction(("inv", t))
            if corr is not None:
                u = compose(corr, u)
        acc = compose(law.F, compose(data.C[r], acc).concat(u))
        corr = data.correction(("mul", cur, r))
        if corr is not None:
            acc = compose(corr, acc)
        cur = data.T.mul[(cur, r)]
    return CosetWordSeries(w, tuple(cosets), cur, acc)


@dataclass(frozen=True)
class MarginalityRow:
    cosets: tuple[str, ...]
    target: str
    constants: tuple[Coefficient, ...]


@dataclass(frozen=True)
class MarginalityReport:
    all_constant: bool
    rows: tuple[MarginalityRow, ...] | None
    witness_cosets: tuple[str, ...] | None
    witness: str | None
    image_bound: int | None

    def to_json(self) -> dict:
        if not self.all_constant:
            return {"all_constant": False,
                    "witness_cosets": list(self.witness_cosets),
                    "witness": self.witness}
        return {"all_constant": True,
                "image_bound": self.image_bound,
                "rows": [{"cosets": list(r.cosets), "target": r.target,
                          "constants": [str(c) for c in r.constants]}
                         for r in self.rows]}


def check_marginality(w: WordExpr, data: TransversalData,
                      bound: int | None = None) -> MarginalityReport:
    """Is the word map constant on every coset tuple?  Returns the table of
    constants (with targets) or the first non-constant witness, iterating
    coset tuples in T-order."""
    bound = default_bound() if bound is None else bound
    count = len(data.T.elements) ** w.k
    if count > bound:
        raise EnumerationBoundError(count, bound)
    rows = []
    for cosets in itertools.product(data.T.elements, repeat=w.k):
        cs = coset_word_series(w, data, cosets)
        verdict = constancy(cs.W)
        if not verdict.constant:
            return MarginalityReport(False, None, cosets, verdict.witness_name(), None)
        # every chart series kills 0, so a constant word map sits on the
        # transversal itself
        assert all(c.is_zero for c in verdict.constants)
        rows.append(MarginalityRow(cosets, cs.target, verdict.constants))
    return MarginalityReport(True, tuple(rows), None, None, count)


# --------------------------------------------------------------------------
# JSON


def extension_to_json(data: TransversalData) -> dict:
    T = data.T
    return {
        "L": {"law": data.L.law.to_json(), "N": data.L.N},
        "T": {
            "elements": list(T.elements),
            "identity": T.identity,
            "mul_table": {t: {r: T.mul[(t, r)] for r in T.elements} for t in T.elements},
            "inv": {t: T.inv[t] for t in T.elements},
        },
        "C": {t: data.C[t].to_json() for t in T.elements},
        "A": {":".join(k): S.to_json() for k, S in sorted(data.A.items())},
        "split": data.split,
    }


def extension_from_json(obj: dict) -> TransversalData:
    from .fgl import law_from_json

    law = law_from_json(obj["L"]["law"])
    L = StandardGroup(law, obj["L"]["N"])
    tj = obj["T"]
    mul = {(t, r): v for t, row in tj["mul_table"].items() for r, v in row.items()}
    T = coset_table(tj["elements"], tj["identity"], mul, tj["inv"])
    C = {t: SeriesTuple.from_json(law.spec, s) for t, s in obj["C"].items()}
    A = {}
    for key, s in obj.get("A", {}).items():
        parts = key.split(":")
        A[tuple(parts)] = SeriesTuple.from_json(law.spec, s)
    return TransversalData(L=L, T=T, C=C, A=A, split=obj.get("split", not A))
