"""Truncated pro-p coefficient rings.

Three ring shapes share a single immutable element type:

* ``p-adic``  -- Z/p^K, the p-adic integers at precision K;
* ``eq-char`` -- F_p[t]/t^K, truncated power series in one variable over F_p;
* ``nested``  -- P[[t1..tm]] truncated at total t-degree Dt, where P is one
  of the two base shapes above (exactly one nesting level).

Payloads are canonical, so ``==`` and ``hash`` are exact at the ring's
precision.  The maximal ideal is (p), (t) or (p, t1, .., tm) respectively;
``Coefficient.valuation`` measures membership in its powers, with the
convention that the weight of a nested monomial ``c * t^alpha`` is
``valuation(c) + |alpha|`` and that valuation is ``+inf`` exactly for the
element that is zero at this precision.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

from .errors import EnumerationBoundError, MaximalIdealError, RingMismatchError

P_ADIC = "p-adic"
EQ_CHAR = "eq-char"
NESTED = "nested"

_BASE_KINDS = (P_ADIC, EQ_CHAR)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def grlex_key(alpha: tuple[int, ...]):
    """Sort key for graded-lex order: total degree first, then X1 before X2."""
    return (sum(alpha), tuple(-a for a in alpha))


@dataclass(frozen=True)
class RingSpec:
    """Shape and precision of a coefficient ring."""

    kind: str
    p: int
    K: int
    base: RingSpec | None = None
    m: int = 0
    Dt: int = 0

    def __post_init__(self):
        if self.kind not in (P_ADIC, EQ_CHAR, NESTED):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.K < 1:
            raise ValueError(f"precision K must be >= 1, got {self.K}")
        if self.kind == NESTED:
            if self.base is None or self.base.kind not in _BASE_KINDS:
                raise ValueError("nested rings require a p-adic or eq-char base")
            if self.base.p != self.p or self.base.K != self.K:
                raise ValueError("nested spec must mirror its base p and K")
            if self.m < 1:
                raise ValueError("nested rings need m >= 1 variables")
            if self.Dt < 1:
                raise ValueError("nested truncation Dt must be >= 1")
        else:
            if self.base is not None or self.m or self.Dt:
                raise ValueError("base/m/Dt only apply to nested rings")

    @cached_property
    def modulus(self) -> int:
        return self.p**self.K

    @property
    def zero_valuation(self) -> int:
        """Least v such that valuation >= v forces zero at this precision."""
        if self.kind == NESTED:
            return self.K + self.Dt - 1
        return self.K

    def to_json(self) -> dict:
        obj = {"kind": self.kind, "p": self.p, "K": self.K}
        if self.kind == NESTED:
            obj["base"] = self.base.to_json()
            obj["m"] = self.m
            obj["Dt"] = self.Dt
        return obj

    @staticmethod
    def from_json(obj: dict) -> RingSpec:
        kind = obj["kind"]
        if kind == NESTED:
            base = RingSpec.from_json(obj["base"])
            spec = nested(base, obj["m"], obj["Dt"])
            if spec.p != obj["p"] or spec.K != obj["K"]:
                raise ValueError("nested ring spec disagrees with its base")
            return spec
        return RingSpec(kind, obj["p"], obj["K"])


def padic(p: int, K: int) -> RingSpec:
    return RingSpec(P_ADIC, p, K)


def eqchar(p: int, K: int) -> RingSpec:
    return RingSpec(EQ_CHAR, p, K)


def nested(base: RingSpec, m: int, Dt: int) -> RingSpec:
    return RingSpec(NESTED, base.p, base.K, base, m, Dt)


# --------------------------------------------------------------------------
# payload primitives; a payload is int (p-adic), tuple[int]*K (eq-char) or a
# graded-lex-sorted tuple of (exponent, base payload) pairs (nested)


def _pl_zero(spec: RingSpec):
    if spec.kind == P_ADIC:
        return 0
    if spec.kind == EQ_CHAR:
        return (0,) * spec.K
    return ()


def _pl_is_zero(spec: RingSpec, a) -> bool:
    if spec.kind == P_ADIC:
        return a == 0
    if spec.kind == EQ_CHAR:
        return not any(a)
    return not a


def _pl_from_int(spec: RingSpec, n: int):
    if spec.kind == P_ADIC:
        return n % spec.modulus
    if spec.kind == EQ_CHAR:
        return ((n % spec.p,) + (0,) * (spec.K - 1)) if n % spec.p else (0,) * spec.K
    c = _pl_from_int(spec.base, n)
    if _pl_is_zero(spec.base, c):
        return ()
    return (((0,) * spec.m, c),)


def _nested_canonical(spec: RingSpec, mapping: dict):
    items = []
    for alpha, c in mapping.items():
        if sum(alpha) >= spec.Dt or _pl_is_zero(spec.base, c):
            continue
        items.append((tuple(alpha), c))
    items.sort(key=lambda it: grlex_key(it[0]))
    return tuple(items)


def _pl_add(spec: RingSpec, a, b):
    if spec.kind == P_ADIC:
        return (a + b) % spec.modulus
    if spec.kind == EQ_CHAR:
        p = spec.p
        return tuple((x + y) % p for x, y in zip(a, b))
    acc = dict(a)
    for alpha, c in b:
        cur = acc.get(alpha)
        acc[alpha] = c if cur is None else _pl_add(spec.base, cur, c)
    return _nested_canonical(spec, acc)


def _pl_neg(spec: RingSpec, a):
    if spec.kind == P_ADIC:
        return (-a) % spec.modulus
    if spec.kind == EQ_CHAR:
        p = spec.p
        return tuple((-x) % p for x in a)
    return tuple((alpha, _pl_neg(spec.base, c)) for alpha, c in a)


def _pl_mul(spec: RingSpec, a, b):
    if spec.kind == P_ADIC:
        return (a * b) % spec.modulus
    if spec.kind == EQ_CHAR:
        p, K = spec.p, spec.K
        out = [0] * K
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if i + j >= K:
                    break
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
        return tuple(out)
    acc: dict = {}
    Dt = spec.Dt
    for alpha, c in a:
        da = sum(alpha)
        for beta, e in b:
            if da + sum(beta) >= Dt:
                continue
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            prod = _pl_mul(spec.base, c, e)
            cur = acc.get(gamma)
            acc[gamma] = prod if cur is None else _pl_add(spec.base, cur, prod)
    return _nested_canonical(spec, acc)


def _pl_valuation(spec: RingSpec, a) -> int | float:
    if spec.kind == P_ADIC:
        if a == 0:
            return math.inf
        v = 0
        while a % spec.p == 0:
            a //= spec.p
            v += 1
        return v
    if spec.kind == EQ_CHAR:
        for i, x in enumerate(a):
            if x:
                return i
        return math.inf
    if not a:
        return math.inf
    return min(_pl_valuation(spec.base, c) + sum(alpha) for alpha, c in a)


def _pl_reduce(spec: RingSpec, a, M: int):
    """Canonical representative of ``a`` modulo m^M."""
    if M <= 0:
        return _pl_zero(spec)
    if spec.kind == P_ADIC:
        return a % spec.p**M if M < spec.K else a
    if spec.kind == EQ_CHAR:
        if M >= spec.K:
            return a
        return a[:M] + (0,) * (spec.K - M)
    acc = {}
    for alpha, c in a:
        r = _pl_reduce(spec.base, c, M - sum(alpha))
        if not _pl_is_zero(spec.base, r):
            acc[alpha] = r
    return _nested_canonical(spec, acc)


@dataclass(frozen=True)
class Coefficient:
    """An element of a truncated coefficient ring, stored canonically."""

    spec: RingSpec
    payload: int | tuple

    @staticmethod
    def zero(spec: RingSpec) -> Coefficient:
        return Coefficient(spec, _pl_zero(spec))

    @staticmethod
    def one(spec: RingSpec) -> Coefficient:
        return Coefficient(spec, _pl_from_int(spec, 1))

    @staticmethod
    def from_int(spec: RingSpec, n: int) -> Coefficient:
        return Coefficient(spec, _pl_from_int(spec, n))

    @staticmethod
    def make(spec: RingSpec, raw) -> Coefficient:
        """Canonicalize a raw payload-like value (int, digit vector, term map)."""
        if isinstance(raw, Coefficient):
            if raw.spec != spec:
                raise RingMismatchError("coefficient belongs to a different ring")
            return raw
        if spec.kind == P_ADIC:
            return Coefficient(spec, int(raw) % spec.modulus)
        if spec.kind == EQ_CHAR:
            if isinstance(raw, int):
                return Coefficient.from_int(spec, raw)
            digits = [int(x) % spec.p for x in raw]
            if len(digits) > spec.K:
                raise ValueError("eq-char payload longer than precision K")
            digits += [0] * (spec.K - len(digits))
            return Coefficient(spec, tuple(digits))
        mapping = dict(raw.items() if isinstance(raw, dict) else raw)
        canon = {}
        for alpha, c in mapping.items():
            alpha = tuple(int(e) for e in alpha)
            if len(alpha) != spec.m or any(e < 0 for e in alpha):
                raise ValueError(f"bad nested exponent vector {alpha}")
            cc = Coefficient.make(spec.base, c)
            prev = canon.get(alpha)
            canon[alpha] = cc.payload if prev is None else _pl_add(spec.base, prev, cc.payload)
        return Coefficient(spec, _nested_canonical(spec, canon))

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> Coefficient:
        if isinstance(other, Coefficient):
            if other.spec != self.spec:
                raise RingMismatchError("coefficients from different rings")
            return other
        if isinstance(other, int):
            return Coefficient.from_int(self.spec, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Coefficient(self.spec, _pl_add(self.spec, self.payload, other.payload))

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(self.spec, _pl_neg(self.spec, self.payload))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Coefficient(self.spec, _pl_mul(self.spec, self.payload, other.payload))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined here")
        acc = Coefficient.one(self.spec)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return _pl_is_zero(self.spec, self.payload)

    def valuation(self) -> int | float:
        return _pl_valuation(self.spec, self.payload)

    def mod_ideal_power(self, M: int) -> Coefficient:
        """Canonical representative of this element modulo m^M."""
        return Coefficient(self.spec, _pl_reduce(self.spec, self.payload, M))

    def nested_terms(self) -> tuple:
        """(alpha, base Coefficient) pairs of a nested element."""
        if self.spec.kind != NESTED:
            raise RingMismatchError("nested_terms only applies to nested rings")
        return tuple((alpha, Coefficient(self.spec.base, c)) for alpha, c in self.payload)

    def __str__(self) -> str:
        return format_coefficient(self)

    def __int__(self) -> int:
        if self.spec.kind != P_ADIC:
            raise TypeError("only p-adic payloads coerce to int")
        return self.payload

    def sort_key(self):
        return self.payload


# --------------------------------------------------------------------------
# specialisation: evaluate the nested variables at a point of the base ideal


def evaluate_terms(spec: RingSpec, terms, args, powers: dict) -> Coefficient:
    """Payload-level sum of c * prod(args[i]^alpha_i) over (alpha, c) terms.

    The polynomial-evaluation hot path: one Coefficient is built at the end,
    everything in between stays on raw payloads.  `powers` caches payloads
    of args[i]^e across calls that share an argument tuple.
    """
    acc = _pl_zero(spec)
    for alpha, c in terms:
        term = c.payload
        for i, e in enumerate(alpha):
            if e == 1:
                term = _pl_mul(spec, term, args[i].payload)
            elif e:
                got = powers.get((i, e))
                if got is None:
                    got = args[i].payload
                    for _ in range(e - 1):
                        got = _pl_mul(spec, got, args[i].payload)
                    powers[(i, e)] = got
                term = _pl_mul(spec, term, got)
        acc = _pl_add(spec, acc, term)
    return Coefficient(spec, acc)


def specialise(a: Coefficient, point: tuple[Coefficient, ...]) -> Coefficient:
    """Evaluate a nested element at t = point, point inside the base maximal ideal."""
    spec = a.spec
    if spec.kind != NESTED:
        raise RingMismatchError("specialise applies to nested ring elements")
    if len(point) != spec.m:
        raise ValueError(f"expected {spec.m} point coordinates, got {len(point)}")
    for q in point:
        if q.spec != spec.base:
            raise RingMismatchError("specialisation point must live in the base ring")
        if q.valuation() < 1:
            raise MaximalIdealError("specialisation point outside the maximal ideal")
    acc = Coefficient.zero(spec.base)
    for alpha, c in a.payload:
        term = Coefficient(spec.base, c)
        for q, e in zip(point, alpha):
            if e:
                term = term * q**e
        acc = acc + term
    return acc


# --------------------------------------------------------------------------
# coefficient maps (local homomorphisms usable for series transport)


class CoefficientMap:
    """A ring homomorphism with phi(m) inside the target maximal ideal."""

    source: RingSpec
    target: RingSpec

    def __call__(self, c: Coefficient) -> Coefficient:  # pragma: no cover
        raise NotImplementedError


class IdentityMap(CoefficientMap):
    def __init__(self, spec: RingSpec):
        self.source = spec
        self.target = spec

    def __call__(self, c: Coefficient) -> Coefficient:
        if c.spec != self.source:
            raise RingMismatchError("coefficient outside this map's source ring")
        return c


class PrecisionReduction(CoefficientMap):
    """Lower the precision K (and, for nested rings, optionally Dt)."""

    def __init__(self, spec: RingSpec, new_K: int, new_Dt: int | None = None):
        if not 1 <= new_K <= spec.K:
            raise ValueError("new precision must satisfy 1 <= new_K <= K")
        self.source = spec
        if spec.kind == NESTED:
            nd = spec.Dt if new_Dt is None else new_Dt
            if not 1 <= nd <= spec.Dt:
                raise ValueError("new Dt must satisfy 1 <= new_Dt <= Dt")
            self.target = nested(RingSpec(spec.base.kind, spec.p, new_K), spec.m, nd)
        else:
            if new_Dt is not None:
                raise ValueError("new_Dt only applies to nested rings")
            self.target = RingSpec(spec.kind, spec.p, new_K)

    def __call__(self, c: Coefficient) -> Coefficient:
        if c.spec != self.source:
            raise RingMismatchError("coefficient outside this map's source ring")
        src = self.source
        if src.kind == P_ADIC:
            return Coefficient.make(self.target, c.payload)
        if src.kind == EQ_CHAR:
            return Coefficient.make(self.target, c.payload[: self.target.K])
        tgt = self.target
        items = {}
        for alpha, pay in c.payload:
            if sum(alpha) >= tgt.Dt:
                continue
            if src.base.kind == P_ADIC:
                items[alpha] = pay
            else:
                items[alpha] = pay[: tgt.K]
        return Coefficient.make(tgt, items)


def residue_map(spec: RingSpec) -> PrecisionReduction:
    """Reduction mod p (precision 1) for the base ring shapes."""
    if spec.kind == NESTED:
        raise RingMismatchError("residue map is defined for the base ring shapes")
    return PrecisionReduction(spec, 1)


# --------------------------------------------------------------------------
# enumeration of m^N modulo m^M


def _rep_count(spec: RingSpec, N: int, M: int) -> int:
    if spec.kind in _BASE_KINDS:
        return spec.p ** (M - N)
    total = 1
    for alpha in bounded_exponents(spec.m, min(M, spec.Dt)):
        lo = max(N - sum(alpha), 0)
        total *= spec.p ** ((M - sum(alpha)) - lo)
    return total


def representatives(spec: RingSpec, N: int, M: int, bound: int | None = None) -> list[Coefficient]:
    """Canonical representatives of m^N modulo m^M, deterministically ordered.

    Requires 0 <= N <= M <= K so every representative is faithful at the
    ring's precision.
    """
    if not 0 <= N <= M:
        raise ValueError("need 0 <= N <= M")
    if M > spec.K:
        raise ValueError(f"quotient level {M} exceeds precision K={spec.K}")
    count = _rep_count(spec, N, M)
    if bound is not None and count > bound:
        raise EnumerationBoundError(count, bound)
    if spec.kind == P_ADIC:
        step = spec.p**N
        return [Coefficient(spec, (step * j) % spec.modulus) for j in range(spec.p ** (M - N))]
    if spec.kind == EQ_CHAR:
        out = []
        width = M - N
        for j in range(spec.p**width):
            digits = [0] * spec.K
            x = j
            for i in range(width):
                digits[N + i] = x % spec.p
                x //= spec.p
            out.append(Coefficient(spec, tuple(digits)))
        return out
    alphas = bounded_exponents(spec.m, min(M, spec.Dt))
    choices = []
    for alpha in alphas:
        lo = max(N - sum(alpha), 0)
        choices.append(representatives(spec.base, lo, M - sum(alpha)))
    out = []
    for combo in itertools.product(*choices):
        items = {a: c.payload for a, c in zip(alphas, combo) if not c.is_zero}
        out.append(Coefficient(spec, _nested_canonical(spec, items)))
    return out


def bounded_exponents(m: int, bound: int) -> list[tuple[int, ...]]:
    """All exponent vectors of length m with total degree < bound, graded-lex."""
    out = [alpha for alpha in itertools.product(range(bound), repeat=m) if sum(alpha) < bound]
    out.sort(key=grlex_key)
    return out


def random_ideal_element(spec: RingSpec, N: int, rng) -> Coefficient:
    """A pseudo-random element of m^N at full precision (rng drives determinism)."""
    if N > spec.zero_valuation:
        return Coefficient.zero(spec)
    if spec.kind == P_ADIC:
        v = min(N, spec.K)
        return Coefficient(spec, (spec.p**v * rng.randrange(spec.p ** (spec.K - v))) % spec.modulus)
    if spec.kind == EQ_CHAR:
        digits = [0] * spec.K
        for i in range(min(N, spec.K), spec.K):
            digits[i] = rng.randrange(spec.p)
        return Coefficient(spec, tuple(digits))
    items = {}
    for alpha in bounded_exponents(spec.m, spec.Dt):
        if rng.random() < 0.5:
            continue
        c = random_ideal_element(spec.base, max(N - sum(alpha), 0), rng)
        if not c.is_zero:
            items[alpha] = c.payload
    return Coefficient(spec, _nested_canonical(spec, items))


# --------------------------------------------------------------------------
# strings


def format_coefficient(c: Coefficient) -> str:
    spec = c.spec
    if spec.kind == P_ADIC:
        return str(c.payload)
    if spec.kind == EQ_CHAR:
        parts = []
        for e, digit in enumerate(c.payload):
            if not digit:
                continue
            if e == 0:
                parts.append(str(digit))
            elif e == 1:
                parts.append(f"{digit}*t")
            else:
                parts.append(f"{digit}*t^{e}")
        return "+".join(parts) if parts else "0"
    parts = []
    for alpha, pay in c.payload:
        cs = format_coefficient(Coefficient(spec.base, pay))
        if spec.base.kind == EQ_CHAR:
            cs = f"({cs})"
        factors = [cs]
        for i, e in enumerate(alpha):
            if e == 1:
                factors.append(f"t{i + 1}")
            elif e > 1:
                factors.append(f"t{i + 1}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts) if parts else "0"


_EQ_TERM = re.compile(r"^(\d+)?(?:\*?t(?:\^(\d+))?)?$")


def _parse_eqchar(spec: RingSpec, text: str) -> Coefficient:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty coefficient string")
    digits = [0] * spec.K
    sign = 1
    token = ""

    def flush(token, sign):
        m = _EQ_TERM.match(token)
        if not m or not token:
            raise ValueError(f"bad eq-char term {token!r}")
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        if "t" in token:
            e = int(m.group(2)) if m.group(2) is not None else 1
        else:
            e = 0
        if e >= spec.K:
            raise ValueError(f"term degree {e} outside precision K={spec.K}")
        digits[e] = (digits[e] + sign * coeff) % spec.p

    i = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    while i < len(s):
        ch = s[i]
        if ch in "+-":
            flush(token, sign)
            token = ""
            sign = -1 if ch == "-" else 1
        else:
            token += ch
        i += 1
    flush(token, sign)
    return Coefficient(spec, tuple(digits))


def _split_top(s: str, seps: str) -> list[str]:
    """Split on separators at paren depth 0, keeping separators as items."""
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced parentheses")
        if depth == 0 and ch in seps:
            out.append(cur)
            out.append(ch)
            cur = ""
        else:
            cur += ch
    if depth:
        raise ValueError("unbalanced parentheses")
    out.append(cur)
    return out


_NESTED_VAR = re.compile(r"^t(\d+)(?:\^(\d+))?$")


def _parse_nested_term(spec: RingSpec, term: str, sign: int) -> Coefficient:
    pieces = [q for q in _split_top(term, "*") if q not in ("*",)]
    pieces = [q.strip() for q in pieces if q.strip()]
    if not pieces:
        raise ValueError("empty nested term")
    alpha = [0] * spec.m
    coeff = None
    for q in pieces:
        mvar = _NESTED_VAR.match(q)
        if mvar:
            idx = int(mvar.group(1))
            if not 1 <= idx <= spec.m:
                raise ValueError(f"variable t{idx} outside 1..{spec.m}")
            alpha[idx - 1] += int(mvar.group(2)) if mvar.group(2) else 1
            continue
        if q.startswith("(") and q.endswith(")"):
            inner = q[1:-1]
        else:
            inner = q
        part = parse_coefficient(spec.base, inner)
        coeff = part if coeff is None else coeff * part
    if coeff is None:
        coeff = Coefficient.one(spec.base)
    if sign < 0:
        coeff = -coeff
    if sum(alpha) >= spec.Dt:
        raise ValueError(f"term t-degree {sum(alpha)} outside truncation Dt={spec.Dt}")
    return Coefficient.make(spec, {tuple(alpha): coeff})


def parse_coefficient(spec: RingSpec, text: str) -> Coefficient:
    """Parse the canonical coefficient grammar (tolerant about whitespace)."""
    s = text.strip()
    if not s:
        raise ValueError("empty coefficient string")
    if spec.kind == P_ADIC:
        try:
            return Coefficient.from_int(spec, int(s))
        except ValueError:
            raise ValueError(f"bad p-adic integer {text!r}") from None
    if spec.kind == EQ_CHAR:
        return _parse_eqchar(spec, s)
    chunks = _split_top(s, "+-")
    acc = Coefficient.zero(spec)
    carry = 1
    first = chunks[0].strip()
    if first:
        acc = acc + _parse_nested_term(spec, first, 1)
    for sep, text in zip(chunks[1::2], chunks[2::2]):
        carry *= -1 if sep == "-" else 1
        text = text.strip()
        if not text:
            continue
        acc = acc + _parse_nested_term(spec, text, carry)
        carry = 1
    if carry != 1 or (len(chunks) > 1 and not chunks[-1].strip()):
        raise ValueError(f"dangling sign in {s!r}")
    return acc
