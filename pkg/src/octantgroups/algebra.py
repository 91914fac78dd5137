"""Exact Laurent polynomials and rational functions in x, y, z over Q.

Polynomials are stored as a flint ``fmpq_mpoly`` with nonnegative exponents and a
monomial shift, so ``x^-1 y`` is kept as shift (-1, 1, 0) times the constant 1.
Rational functions are kept reduced by a polynomial gcd; without it, composing a
handful of generator maps already produces numerators with 10^5 terms.

Modular evaluation here is the slow reference path; the hot loops live in
:mod:`octantgroups.kernels`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import flint

VARS = ("x", "y", "z")
CTX = flint.fmpq_mpoly_ctx.get(VARS, "degrevlex")

#: primes just below 2**62 used for modular evaluation
PRIMES = (4611686018427387847, 4611686018427387817, 4611686018427387787)
DEFAULT_PRIME = PRIMES[0]


class DenominatorVanishes(ZeroDivisionError):
    """A denominator evaluated to zero; the evaluation point must be resampled."""


def _monomial(exps: Sequence[int]):
    return CTX.from_dict({tuple(exps): 1})


def _split_shift(poly, shift):
    """Pull the monomial content of ``poly`` into ``shift``."""
    if poly.is_zero():
        return poly, (0, 0, 0)
    content = poly.term_content()
    e = tuple(int(a) for a in next(iter(content.monoms())))
    if any(e):
        poly = poly / content
        shift = tuple(a + b for a, b in zip(shift, e))
    return poly, tuple(shift)


class LaurentPolynomial:
    __slots__ = ("poly", "shift")

    def __init__(self, poly=None, shift=(0, 0, 0)):
        if poly is None:
            poly = CTX.from_dict({})
        self.poly, self.shift = _split_shift(poly, tuple(shift))

    @classmethod
    def from_terms(cls, terms: Mapping[Sequence[int], object]) -> "LaurentPolynomial":
        terms = {tuple(int(a) for a in e): Fraction(c) for e, c in terms.items() if c != 0}
        if not terms:
            return cls()
        low = [min(e[k] for e in terms) for k in range(3)]
        d = {}
        for e, c in terms.items():
            d[tuple(a - l for a, l in zip(e, low))] = flint.fmpq(c.numerator, c.denominator)
        return cls(CTX.from_dict(d), low)

    @classmethod
    def constant(cls, c) -> "LaurentPolynomial":
        return cls.from_terms({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> "LaurentPolynomial":
        e = [0, 0, 0]
        e[VARS.index(name)] = 1
        return cls.from_terms({tuple(e): 1})

    def terms(self) -> dict[tuple[int, int, int], Fraction]:
        out = {}
        for e, c in self.poly.terms():
            out[tuple(int(a) + s for a, s in zip(e, self.shift))] = Fraction(int(c.p), int(c.q))
        return out

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(VARS[k] for e in self.terms() for k in range(3) if e[k])

    def _aligned(self, other: "LaurentPolynomial"):
        if self.is_zero():
            return other.shift, CTX.from_dict({}), other.poly
        if other.is_zero():
            return self.shift, self.poly, CTX.from_dict({})
        low = tuple(min(a, b) for a, b in zip(self.shift, other.shift))
        p = self.poly * _monomial([a - l for a, l in zip(self.shift, low)])
        q = other.poly * _monomial([a - l for a, l in zip(other.shift, low)])
        return low, p, q

    def __add__(self, other):
        other = _as_lp(other)
        low, p, q = self._aligned(other)
        return LaurentPolynomial(p + q, low)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(-self.poly, self.shift)

    def __sub__(self, other):
        return self + (-_as_lp(other))

    def __rsub__(self, other):
        return _as_lp(other) - self

    def __mul__(self, other):
        other = _as_lp(other)
        return LaurentPolynomial(self.poly * other.poly,
                                 tuple(a + b for a, b in zip(self.shift, other.shift)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        return LaurentPolynomial(self.poly ** n, tuple(n * a for a in self.shift))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.shift == other.shift and self.poly == other.poly

    def __hash__(self):
        return hash((self.shift, str(self.poly)))

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in sorted(self.terms().items()):
            mono = "*".join(
                VARS[k] if e[k] == 1 else f"{VARS[k]}^{e[k]}" for k in range(3) if e[k])
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def evaluate(self, values: Sequence, modulus: int | None = None):
        total = 0 if modulus is not None else Fraction(0)
        for e, c in self.terms().items():
            if modulus is None:
                term = c
                for v, a in zip(values, e):
                    term *= Fraction(v) ** a
            else:
                term = c.numerator * pow(c.denominator, -1, modulus) % modulus
                for v, a in zip(values, e):
                    term = term * pow(v, a, modulus) % modulus
            total += term
        return total % modulus if modulus is not None else total


def _as_lp(v) -> LaurentPolynomial:
    if isinstance(v, LaurentPolynomial):
        return v
    return LaurentPolynomial.constant(v)


def lp_arith(f: LaurentPolynomial, g: LaurentPolynomial, op: str) -> LaurentPolynomial:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


class RationalFunction:
    """``x^shift * num / den`` with num, den coprime polynomials and den monic.

    ``den`` carries no monomial factor, so two equal functions always have equal
    fields; :func:`rf_equal` still decides equality by cross-multiplication.
    """

    __slots__ = ("num", "den", "shift")

    def __init__(self, num, den=None, shift=(0, 0, 0), _reduced=False):
        if den is None:
            den = CTX.from_dict({(0, 0, 0): 1})
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den, self.shift = num, CTX.from_dict({(0, 0, 0): 1}), (0, 0, 0)
            return
        if not _reduced:
            g = num.gcd(den)
            if not g.is_one():
                num, den = num / g, den / g
        num, s1 = _split_shift(num, shift)
        den, s2 = _split_shift(den, (0, 0, 0))
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        self.num, self.den = num, den
        self.shift = tuple(a - b for a, b in zip(s1, s2))

    @classmethod
    def from_laurent(cls, num: LaurentPolynomial, den: LaurentPolynomial | None = None):
        if den is None:
            return cls(num.poly, None, num.shift)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        shift = tuple(a - b for a, b in zip(num.shift, den.shift))
        return cls(num.poly, den.poly, shift)

    @classmethod
    def var(cls, name: str) -> "RationalFunction":
        return cls.from_laurent(LaurentPolynomial.var(name))

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls.from_laurent(LaurentPolynomial.constant(c))

    @property
    def numerator(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.num, tuple(max(a, 0) for a in self.shift))

    @property
    def denominator(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.den, tuple(max(-a, 0) for a in self.shift))

    def cleared(self):
        """Numerator and denominator as plain polynomials with the shift folded in."""
        pos = _monomial([max(a, 0) for a in self.shift])
        neg = _monomial([max(-a, 0) for a in self.shift])
        return self.num * pos, self.den * neg

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den,
                                tuple(a + b for a, b in zip(self.shift, other.shift)))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num, tuple(-a for a in self.shift), _reduced=True)

    def __truediv__(self, other):
        return self * _as_rf(other).inverse()

    def __rtruediv__(self, other):
        return _as_rf(other) * self.inverse()

    def __add__(self, other):
        other = _as_rf(other)
        a, b = self.cleared()
        c, d = other.cleared()
        return RationalFunction(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.shift, _reduced=True)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n,
                                tuple(n * a for a in self.shift), _reduced=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, LaurentPolynomial)):
            other = _as_rf(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return rf_equal(self, other)

    def __hash__(self):
        return hash((self.shift, str(self.num), str(self.den)))

    def __repr__(self):
        return f"RationalFunction(({self.numerator}) / ({self.denominator}))"

    @property
    def size(self) -> int:
        return len(self.num) + len(self.den)

    def degree(self) -> int:
        a, b = self.cleared()
        return max(a.total_degree(), b.total_degree())


def _as_rf(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, LaurentPolynomial):
        return RationalFunction.from_laurent(v)
    return RationalFunction.constant(v)


def rf_equal(f: RationalFunction, g: RationalFunction) -> bool:
    """Exact equality by cross-multiplication."""
    a, b = f.cleared()
    c, d = g.cleared()
    return (a * d - c * b).is_zero()


@dataclass(frozen=True)
class EvaluationPoint:
    """Values for (x, y, z): exact rationals when ``modulus`` is None, else residues."""

    values: tuple
    modulus: int | None = None

    def __post_init__(self):
        if len(self.values) != 3:
            raise ValueError("an evaluation point has three coordinates")
        if self.modulus is None:
            object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
            if any(v == 0 for v in self.values):
                raise ValueError("coordinates must be nonzero")
        else:
            object.__setattr__(self, "values", tuple(int(v) % self.modulus for v in self.values))
            if any(v == 0 for v in self.values):
                raise ValueError("coordinates must be nonzero mod p")

    @classmethod
    def random(cls, rng: random.Random, modulus: int = DEFAULT_PRIME) -> "EvaluationPoint":
        return cls(tuple(rng.randrange(1, modulus) for _ in range(3)), modulus)


def evaluate(f, point: EvaluationPoint):
    if isinstance(f, LaurentPolynomial):
        return f.evaluate(point.values, point.modulus)
    num = f.numerator.evaluate(point.values, point.modulus)
    den = f.denominator.evaluate(point.values, point.modulus)
    if den == 0:
        raise DenominatorVanishes(f"denominator vanishes at {point.values}")
    if point.modulus is None:
        return num / den
    return num * pow(den, -1, point.modulus) % point.modulus


def sum_ratio(minus: Mapping[tuple, object], plus: Mapping[tuple, object],
              args: Sequence[RationalFunction]) -> RationalFunction:
    """``M(args) / P(args)`` for Laurent polynomials given by exponent->coefficient maps.

    The exponent vectors index into ``args``.  Both sums are cleared by the same
    monomial in the argument numerators and denominators, which cancels in the
    quotient, so no intermediate rational-function additions are needed.
    """
    n = len(args)
    exps = list(minus) + list(plus)
    lo = [min(0, *(e[k] for e in exps)) for k in range(n)]
    hi = [max(0, *(e[k] for e in exps)) for k in range(n)]
    parts = [a.cleared() for a in args]
    pows: list[dict] = []
    for k, (an, ad) in enumerate(parts):
        pn = {0: CTX.from_dict({(0, 0, 0): 1})}
        pd = {0: CTX.from_dict({(0, 0, 0): 1})}
        for m in range(1, hi[k] - lo[k] + 1):
            pn[m] = pn[m - 1] * an
            pd[m] = pd[m - 1] * ad
        pows.append((pn, pd))

    def cleared_sum(terms):
        acc = CTX.from_dict({})
        for e, c in terms.items():
            t = CTX.from_dict({(0, 0, 0): flint.fmpq(Fraction(c).numerator, Fraction(c).denominator)})
            for k in range(n):
                pn, pd = pows[k]
                t = t * pn[e[k] - lo[k]] * pd[hi[k] - e[k]]
            acc = acc + t
        return acc

    den = cleared_sum(plus)
    if den.is_zero():
        raise ZeroDivisionError("denominator sum vanishes identically")
    return RationalFunction(cleared_sum(minus), den)


def substitute(f: RationalFunction, var: str, g: RationalFunction) -> RationalFunction:
    """Replace ``var`` by ``g`` in ``f`` exactly."""
    if g.is_zero():
        raise ZeroDivisionError("substituting zero")
    k = VARS.index(var)
    args = [RationalFunction.var(v) for v in VARS]
    args[k] = g
    num = f.numerator.terms()
    den = f.denominator.terms()
    return sum_ratio(num, den, args)
