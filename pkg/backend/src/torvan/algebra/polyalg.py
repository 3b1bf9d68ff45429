"""Exact arithmetic over prime fields: field elements, monomials, graded polynomials
and monomial orders.

Polynomials are immutable. A `Polynomial` keeps its terms in a dict keyed by dense
exponent tuples; coefficients are plain ints in ``[1, p - 1]`` (zero terms are never
stored). Terms are listed in descending order for the ring's monomial order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Literal, Mapping, Optional, Sequence, Union

from sympy import Poly, Symbol, isprime
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from torvan.core.errors import InvalidInput

Monomial = tuple[int, ...]

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


# ---------------------------------------------------------------------------
# Field elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    """An element of F_p."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other: Union["FieldElement", int]) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise InvalidInput(f"field mismatch: F_{self.p} vs F_{other.p}", field="p")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.p)

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __bool__(self):
        return self.value != 0


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(b: Monomial, a: Monomial) -> bool:
    return all(y <= x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------

ModuleKind = Literal["top", "pot", "elim"]


@dataclass(frozen=True)
class MonomialOrder:
    """Weighted-degree reverse lexicographic order, extended to free modules.

    ``module_kind`` selects the extension to a free module with twists:

    * ``top``  -- term over position: degree, then grevlex, then lower index wins;
    * ``pot``  -- position over term: lower index wins, then degree and grevlex;
    * ``elim`` -- components ``< split`` dominate all others (block order), ``top`` inside
      each block. Used to read off syzygies from an augmented module.
    """

    weights: tuple[int, ...]
    module_kind: ModuleKind = "top"
    split: int = 0

    def degree(self, exps: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    def key(self, exps: Monomial) -> tuple:
        return (self.degree(exps), tuple(-e for e in reversed(exps)))

    def module_key(self, pos: int, exps: Monomial, twists: Sequence[int]) -> tuple:
        deg = self.degree(exps) + twists[pos]
        tail = tuple(-e for e in reversed(exps))
        if self.module_kind == "pot":
            return (-pos, deg, tail)
        if self.module_kind == "elim":
            return (1 if pos < self.split else 0, deg, tail, -pos)
        return (deg, tail, -pos)

    def with_module(self, module_kind: ModuleKind, split: int = 0) -> "MonomialOrder":
        return MonomialOrder(self.weights, module_kind, split)


def monomial_cmp(order: MonomialOrder, m1: Monomial, m2: Monomial) -> int:
    """Compare two monomials: 1 if m1 > m2, -1 if m1 < m2, 0 if equal."""
    if len(m1) != len(m2):
        raise InvalidInput("monomials have different variable counts", field="monomial")
    k1, k2 = order.key(m1), order.key(m2)
    return (k1 > k2) - (k1 < k2)


# ---------------------------------------------------------------------------
# Polynomial rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyRing:
    """The ambient ring Q = F_p[x_1..x_n] with positive variable weights."""

    p: int
    names: tuple[str, ...]
    weights: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.weights:
            object.__setattr__(self, "weights", tuple(1 for _ in self.names))
        if not isprime(self.p):
            raise InvalidInput(f"{self.p} is not prime", field="p")
        if len(self.weights) != len(self.names):
            raise InvalidInput("one weight per variable is required", field="vars")
        if any(w <= 0 for w in self.weights):
            raise InvalidInput("variable weights must be positive", field="vars")
        if len(set(self.names)) != len(self.names):
            raise InvalidInput("duplicate variable names", field="vars")
        for name in self.names:
            if not name.isidentifier():
                raise InvalidInput(f"bad variable name {name!r}", field="vars")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @cached_property
    def order(self) -> MonomialOrder:
        return MonomialOrder(self.weights)

    @cached_property
    def standard_grading(self) -> bool:
        return all(w == 1 for w in self.weights)

    def degree(self, exps: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        return Polynomial(self, {tuple(0 for _ in self.names): c})

    def monomial(self, exps: Monomial, c: int = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): c})

    def var(self, name: str) -> "Polynomial":
        if name not in self.names:
            raise InvalidInput(f"unknown variable {name!r}", field="vars")
        i = self.names.index(name)
        return self.monomial(tuple(1 if j == i else 0 for j in range(self.nvars)))

    def gens(self) -> list["Polynomial"]:
        return [self.var(n) for n in self.names]

    def extend(self, name: str, weight: int = 1) -> "PolyRing":
        """The ring with one extra variable appended."""
        return PolyRing(self.p, self.names + (name,), self.weights + (weight,))

    def parse(self, text: Union[str, int]) -> "Polynomial":
        """Parse ``3*x^2*y - y^3 + 1`` into a polynomial; coefficients are reduced mod p."""
        symbols = [Symbol(n) for n in self.names]
        local = {n: s for n, s in zip(self.names, symbols)}
        try:
            expr = parse_expr(str(text), local_dict=local, transformations=_TRANSFORMATIONS)
        except Exception as exc:  # sympy raises a zoo of parser errors
            raise InvalidInput(f"cannot parse polynomial {text!r}: {exc}", field="polynomial") from exc
        unknown = {str(s) for s in expr.free_symbols} - set(self.names)
        if unknown:
            raise InvalidInput(f"unknown variables {sorted(unknown)} in {text!r}", field="polynomial")
        try:
            poly = Poly(expr, *symbols, modulus=self.p) if symbols else None
        except Exception as exc:
            raise InvalidInput(f"not a polynomial over F_{self.p}: {text!r}", field="polynomial") from exc
        if poly is None:
            return self.const(int(expr) % self.p)
        return Polynomial(self, {tuple(m): int(c) % self.p for m, c in poly.terms()})

    @lru_cache(maxsize=None)
    def monomials_of_degree(self, d: int) -> tuple[Monomial, ...]:
        """All monomials of weighted degree d, descending in the monomial order."""
        if d < 0:
            return ()
        out: list[Monomial] = []

        def rec(i: int, remaining: int, acc: list[int]):
            if i == self.nvars:
                if remaining == 0:
                    out.append(tuple(acc))
                return
            w = self.weights[i]
            for e in range(remaining // w, -1, -1):
                acc.append(e)
                rec(i + 1, remaining - e * w, acc)
                acc.pop()

        rec(0, d, [])
        out.sort(key=self.order.key, reverse=True)
        return tuple(out)

    def random_homogeneous(self, degree: int, rng: random.Random, density: float = 0.5) -> "Polynomial":
        terms = {}
        for m in self.monomials_of_degree(degree):
            if rng.random() < density:
                terms[m] = rng.randrange(1, self.p)
        return Polynomial(self, terms)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """An immutable polynomial over F_p."""

    __slots__ = ("ring", "_terms", "_sorted", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, int]):
        p = ring.p
        self.ring = ring
        self._terms = {m: c % p for m, c in terms.items() if c % p}
        self._sorted = None
        self._hash = None

    # -- structure ---------------------------------------------------------
    @property
    def terms(self) -> tuple[tuple[Monomial, int], ...]:
        if self._sorted is None:
            key = self.ring.order.key
            self._sorted = tuple(sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True))
        return self._sorted

    def term_dict(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def lead(self) -> tuple[Monomial, int]:
        if not self._terms:
            raise InvalidInput("the zero polynomial has no leading term", field="polynomial")
        return self.terms[0]

    def degree(self) -> Optional[int]:
        """Weighted degree of the leading term (None for 0)."""
        if not self._terms:
            return None
        return self.ring.degree(self.terms[0][0])

    def is_homogeneous(self) -> bool:
        degrees = {self.ring.degree(m) for m in self._terms}
        return len(degrees) <= 1

    def coefficient(self, exps: Monomial) -> FieldElement:
        return FieldElement(self._terms.get(tuple(exps), 0), self.ring.p)

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise InvalidInput("polynomials live in different ambient rings", field="ring")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "Polynomial":
        return Polynomial(self.ring, {m: c * v for m, v in self._terms.items()})

    def mul_term(self, exps: Monomial, c: int = 1) -> "Polynomial":
        return Polynomial(self.ring, {mono_mul(m, exps): c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, FieldElement):
            return self.scale(other.value)
        self._check(other)
        p = self.ring.p
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        inv = pow(self.lead()[1], -1, self.ring.p)
        return self.scale(inv)

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- text --------------------------------------------------------------
    def _mono_text(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.ring.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def to_text(self, pretty: bool = True) -> str:
        """Canonical text. With ``pretty`` coefficients above p/2 print as negatives."""
        if not self._terms:
            return "0"
        p = self.ring.p
        pieces: list[tuple[str, str]] = []
        for m, c in self.terms:
            sign = "+"
            if pretty and p > 2 and c > p // 2:
                sign, c = "-", p - c
            mono = self._mono_text(m)
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"


def poly_arith(a: Polynomial, b: Union[Polynomial, int], op: Literal["add", "mul", "scalar"]) -> Polynomial:
    """Exact ring operation; ``scalar`` multiplies a by the integer b (reduced mod p)."""
    if op == "scalar":
        if not isinstance(b, int):
            raise InvalidInput("scalar must be an integer", field="b")
        return a.scale(b)
    if not isinstance(b, Polynomial) or a.ring != b.ring:
        raise InvalidInput("mismatched ambient ring", field="b")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise InvalidInput(f"unknown operation {op!r}", field="op")
