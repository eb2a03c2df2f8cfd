"""Truncated multivariate power series over the coefficient rings.

A ``Series`` is a sparse polynomial representative of R[[X1..Xn]] / (degree
>= D): only monomials of total degree < D are stored, with nonzero
coefficients, in graded-lex order.  Arithmetic silently drops everything of
degree >= D.  ``compose`` requires the inner series to have zero constant
term; at a finite degree truncation a constant term would make every output
coefficient an infinite sum, so that case is rejected rather than
approximated.  ``substitute`` is the finite partial-evaluation primitive
(ring constants are allowed); callers own its precision analysis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MaximalIdealError, RingMismatchError, ShapeError, SubstitutionError
from .rings import Coefficient, RingSpec, evaluate_terms, grlex_key, parse_coefficient


def _check_point(spec: RingSpec, nvars: int, args) -> None:
    if len(args) != nvars:
        raise ShapeError(f"expected {nvars} arguments, got {len(args)}")
    for a in args:
        if a.spec != spec:
            raise RingMismatchError("evaluation point in a different ring")
        if a.valuation() < 1:
            raise MaximalIdealError("evaluation point outside the maximal ideal")


def monomial_name(alpha: tuple[int, ...], stem: str = "X") -> str:
    factors = []
    for i, e in enumerate(alpha):
        if e == 1:
            factors.append(f"{stem}{i + 1}")
        elif e > 1:
            factors.append(f"{stem}{i + 1}^{e}")
    return "*".join(factors) if factors else "1"


@dataclass(frozen=True)
class Series:
    spec: RingSpec
    nvars: int
    D: int
    terms: tuple[tuple[tuple[int, ...], Coefficient], ...]

    @staticmethod
    def make(spec: RingSpec, nvars: int, D: int, items, truncate: bool = False) -> Series:
        """Canonicalize a term mapping; reject (or drop) degree >= D."""
        if nvars < 1:
            raise ShapeError("series need at least one variable")
        if D < 1:
            raise ShapeError("degree truncation D must be >= 1")
        mapping = items.items() if isinstance(items, dict) else items
        acc: dict[tuple[int, ...], Coefficient] = {}
        for alpha, c in mapping:
            alpha = tuple(int(e) for e in alpha)
            if len(alpha) != nvars or any(e < 0 for e in alpha):
                raise ShapeError(f"bad exponent vector {alpha} for {nvars} variables")
            if sum(alpha) >= D:
                if truncate:
                    continue
                raise ShapeError(f"monomial degree {sum(alpha)} outside truncation D={D}")
            c = Coefficient.make(spec, c)
            prev = acc.get(alpha)
            cur = c if prev is None else prev + c
            if cur.is_zero:
                acc.pop(alpha, None)
            else:
                acc[alpha] = cur
        ordered = tuple(sorted(acc.items(), key=lambda it: grlex_key(it[0])))
        return Series(spec, nvars, D, ordered)

    @staticmethod
    def zero(spec: RingSpec, nvars: int, D: int) -> Series:
        return Series.make(spec, nvars, D, {})

    @staticmethod
    def constant(spec: RingSpec, nvars: int, D: int, c) -> Series:
        return Series.make(spec, nvars, D, {(0,) * nvars: Coefficient.make(spec, c)})

    @staticmethod
    def variable(spec: RingSpec, nvars: int, D: int, i: int) -> Series:
        if not 0 <= i < nvars:
            raise ShapeError(f"variable index {i} outside 0..{nvars - 1}")
        alpha = tuple(1 if j == i else 0 for j in range(nvars))
        return Series.make(spec, nvars, D, {alpha: Coefficient.one(spec)})

    # -- basic structure ----------------------------------------------------

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Coefficient:
        for alpha, c in self.terms:
            if sum(alpha) == 0:
                return c
        return Coefficient.zero(self.spec)

    def coefficient(self, alpha: tuple[int, ...]) -> Coefficient:
        for beta, c in self.terms:
            if beta == tuple(alpha):
                return c
        return Coefficient.zero(self.spec)

    def graded_slice(self, k: int) -> Series:
        return Series(self.spec, self.nvars, self.D,
                      tuple((a, c) for a, c in self.terms if sum(a) == k))

    def _check_mate(self, other: Series):
        if self.spec != other.spec:
            raise RingMismatchError("series over different coefficient rings")
        if self.nvars != other.nvars or self.D != other.D:
            raise ShapeError("series shapes differ")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: Series) -> Series:
        self._check_mate(other)
        acc = dict(self.terms)
        for alpha, c in other.terms:
            prev = acc.get(alpha)
            cur = c if prev is None else prev + c
            if cur.is_zero:
                acc.pop(alpha, None)
            else:
                acc[alpha] = cur
        return Series(self.spec, self.nvars, self.D,
                      tuple(sorted(acc.items(), key=lambda it: grlex_key(it[0]))))

    def __neg__(self) -> Series:
        return Series(self.spec, self.nvars, self.D,
                      tuple((a, -c) for a, c in self.terms))

    def __sub__(self, other: Series) -> Series:
        return self + (-other)

    def __mul__(self, other: Series) -> Series:
        self._check_mate(other)
        acc: dict[tuple[int, ...], Coefficient] = {}
        D = self.D
        for alpha, c in self.terms:
            da = sum(alpha)
            for beta, e in other.terms:
                if da + sum(beta) >= D:
                    continue
                gamma = tuple(x + y for x, y in zip(alpha, beta))
                prod = c * e
                prev = acc.get(gamma)
                cur = prod if prev is None else prev + prod
                if cur.is_zero:
                    acc.pop(gamma, None)
                else:
                    acc[gamma] = cur
        return Series(self.spec, self.nvars, self.D,
                      tuple(sorted(acc.items(), key=lambda it: grlex_key(it[0]))))

    def scale(self, c) -> Series:
        c = Coefficient.make(self.spec, c)
        acc = []
        for alpha, x in self.terms:
            y = x * c
            if not y.is_zero:
                acc.append((alpha, y))
        return Series(self.spec, self.nvars, self.D, tuple(acc))

    def __pow__(self, e: int) -> Series:
        if e < 0:
            raise ValueError("negative series powers are not defined")
        acc = Series.constant(self.spec, self.nvars, self.D, 1)
        for _ in range(e):
            acc = acc * self
        return acc

    # -- semantics -----------------------------------------------------------

    def evaluate(self, args: tuple[Coefficient, ...]) -> Coefficient:
        """Sum the series at a point of m^(nvars); exact at this precision
        whenever truncation is invisible (the tests fix D >= the zero
        threshold of the ring)."""
        _check_point(self.spec, self.nvars, args)
        return self._evaluate_unchecked(args, {})

    def _evaluate_unchecked(self, args, powers: dict) -> Coefficient:
        # hot path: args pre-validated, powers shared across a tuple
        return evaluate_terms(self.spec, self.terms, args, powers)

    def map_coefficients(self, phi) -> Series:
        """Transport along a coefficient map: apply phi termwise."""
        if phi.source != self.spec:
            raise RingMismatchError("coefficient map domain differs from series ring")
        items = {}
        for alpha, c in self.terms:
            y = phi(c)
            if not y.is_zero:
                items[alpha] = y
        return Series.make(phi.target, self.nvars, self.D, items)

    def __str__(self) -> str:
        parts = []
        for alpha, c in self.terms:
            cs = str(c)
            if ("+" in cs or " " in cs) and sum(alpha) > 0:
                cs = f"({cs})"
            mon = monomial_name(alpha)
            parts.append(cs if mon == "1" else f"{cs}*{mon}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "D": self.D,
            "terms": [[list(alpha), str(c)] for alpha, c in self.terms],
        }

    @staticmethod
    def from_json(spec: RingSpec, obj: dict) -> Series:
        items = []
        for alpha, text in obj["terms"]:
            items.append((tuple(alpha), parse_coefficient(spec, text)))
        return Series.make(spec, obj["nvars"], obj["D"], items)


@dataclass(frozen=True)
class SeriesTuple:
    """A homogeneous tuple of series (same ring, variable count and D)."""

    components: tuple[Series, ...]

    def __post_init__(self):
        if not self.components:
            raise ShapeError("series tuples must be nonempty")
        first = self.components[0]
        for s in self.components[1:]:
            first._check_mate(s)

    @staticmethod
    def of(*components: Series) -> SeriesTuple:
        return SeriesTuple(tuple(components))

    @staticmethod
    def zeros(spec: RingSpec, count: int, nvars: int, D: int) -> SeriesTuple:
        return SeriesTuple(tuple(Series.zero(spec, nvars, D) for _ in range(count)))

    @staticmethod
    def block(spec: RingSpec, nvars: int, D: int, offset: int, count: int) -> SeriesTuple:
        """The variable selectors (X_{offset+1}, .., X_{offset+count})."""
        return SeriesTuple(tuple(Series.variable(spec, nvars, D, offset + i) for i in range(count)))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> Series:
        return self.components[i]

    @property
    def spec(self) -> RingSpec:
        return self.components[0].spec

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @property
    def D(self) -> int:
        return self.components[0].D

    def concat(self, other: SeriesTuple) -> SeriesTuple:
        return SeriesTuple(self.components + other.components)

    def __add__(self, other: SeriesTuple) -> SeriesTuple:
        if len(other) != len(self):
            raise ShapeError("tuple lengths differ")
        return SeriesTuple(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: SeriesTuple) -> SeriesTuple:
        if len(other) != len(self):
            raise ShapeError("tuple lengths differ")
        return SeriesTuple(tuple(a - b for a, b in zip(self.components, other.components)))

    def evaluate(self, args: tuple[Coefficient, ...]) -> tuple[Coefficient, ...]:
        _check_point(self.spec, self.nvars, args)
        return self._evaluate_trusted(args)

    def _evaluate_trusted(self, args) -> tuple[Coefficient, ...]:
        powers: dict = {}
        return tuple(s._evaluate_unchecked(args, powers) for s in self.components)

    def map_coefficients(self, phi) -> SeriesTuple:
        return SeriesTuple(tuple(s.map_coefficients(phi) for s in self.components))

    def constant_terms(self) -> tuple[Coefficient, ...]:
        return tuple(s.constant_term() for s in self.components)

    def has_zero_constant_terms(self) -> bool:
        return all(s.constant_term().is_zero for s in self.components)

    def to_json(self) -> list:
        return [s.to_json() for s in self.components]

    @staticmethod
    def from_json(spec: RingSpec, obj: list) -> SeriesTuple:
        return SeriesTuple(tuple(Series.from_json(spec, o) for o in obj))


# --------------------------------------------------------------------------
# substitution


def _substitute_series(series: Series, subs, out_nvars: int, out_D: int,
                       powers: dict) -> Series:
    spec = series.spec
    zero_vec = (0,) * out_nvars
    acc: dict[tuple[int, ...], Coefficient] = {}

    def bump(alpha, c):
        prev = acc.get(alpha)
        cur = c if prev is None else prev + c
        if cur.is_zero:
            acc.pop(alpha, None)
        else:
            acc[alpha] = cur

    def power(i: int, e: int) -> Series:
        got = powers.get((i, e))
        if got is None:
            got = subs[i] if e == 1 else power(i, e - 1) * subs[i]
            powers[(i, e)] = got
        return got

    for alpha, c in series.terms:
        scalar = c
        factor: Series | None = None
        dead = False
        for i, e in enumerate(alpha):
            if not e:
                continue
            s = subs[i]
            if isinstance(s, Coefficient):
                scalar = scalar * s**e
                if scalar.is_zero:
                    dead = True
                    break
            else:
                pw = power(i, e)
                factor = pw if factor is None else factor * pw
                if factor.is_zero:
                    dead = True
                    break
        if dead:
            continue
        if factor is None:
            bump(zero_vec, scalar)
        else:
            for beta, e in factor.terms:
                bump(beta, e * scalar)
    return Series.make(spec, out_nvars, out_D, acc, truncate=True)


def substitute(outer: SeriesTuple | Series, subs) -> SeriesTuple | Series:
    """Substitute a Series or ring Coefficient for each variable of ``outer``.

    This is finite truncated substitution: it evaluates the stored polynomial
    representative exactly.  Constants must lie in the maximal ideal.
    """
    single = isinstance(outer, Series)
    comps = (outer,) if single else outer.components
    nvars = comps[0].nvars
    if len(subs) != nvars:
        raise ShapeError(f"expected {nvars} substitution entries, got {len(subs)}")
    spec = comps[0].spec
    proto: Series | None = None
    for s in subs:
        if isinstance(s, Coefficient):
            if s.spec != spec:
                raise RingMismatchError("substituted constant in a different ring")
            if s.valuation() < 1:
                raise MaximalIdealError("substituted constant outside the maximal ideal")
        elif isinstance(s, Series):
            if s.spec != spec:
                raise RingMismatchError("substituted series over a different ring")
            if s.D != comps[0].D:
                raise ShapeError("substituted series has a different truncation degree")
            if proto is None:
                proto = s
            elif proto.nvars != s.nvars:
                raise ShapeError("substituted series disagree on variable count")
        else:
            raise ShapeError(f"cannot substitute object of type {type(s).__name__}")
    if proto is None:
        raise ShapeError("substitution needs at least one series entry; use evaluate")
    powers: dict = {}
    out = tuple(_substitute_series(s, list(subs), proto.nvars, proto.D, powers)
                for s in comps)
    return out[0] if single else SeriesTuple(out)


def compose(outer: SeriesTuple, inner: SeriesTuple) -> SeriesTuple:
    """outer(inner): requires every inner component to have zero constant term."""
    if outer.spec != inner.spec:
        raise RingMismatchError("composition over different coefficient rings")
    if outer.nvars != len(inner):
        raise ShapeError(f"outer has {outer.nvars} variables, inner supplies {len(inner)}")
    if outer.D != inner.D:
        raise ShapeError("composition requires matching truncation degrees")
    if not inner.has_zero_constant_terms():
        raise SubstitutionError("substitution not supported at truncation: "
                                "inner series has a nonzero constant term")
    return substitute(outer, list(inner.components))


# --------------------------------------------------------------------------
# constancy


@dataclass(frozen=True)
class Constancy:
    constant: bool
    constants: tuple[Coefficient, ...] | None
    component: int | None
    witness: tuple[int, ...] | None

    def witness_name(self) -> str | None:
        if self.witness is None:
            return None
        return f"component {self.component + 1}: {monomial_name(self.witness)}"


def constancy(T: SeriesTuple) -> Constancy:
    """Decide whether every component is a constant; witness the smallest
    positive-degree monomial (graded-lex, then component order) otherwise."""
    best: tuple | None = None
    for j, s in enumerate(T.components):
        for alpha, _ in s.terms:
            if sum(alpha) == 0:
                continue
            key = (grlex_key(alpha), j)
            if best is None or key < best[0]:
                best = (key, j, alpha)
            break  # terms are graded-lex sorted; first positive term is smallest
    if best is None:
        return Constancy(True, T.constant_terms(), None, None)
    return Constancy(False, None, best[1], best[2])
