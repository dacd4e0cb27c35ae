"""Exact scalar arithmetic over a fixed parameter alphabet.

Three scalar kinds appear throughout the package:

* rationals, represented by `fractions.Fraction` (arbitrary precision,
  canonical lowest terms, positive denominator, str() renders "n/d" and
  omits "/1");
* `Polynomial`, a sparse multivariate polynomial over a fixed, ordered
  alphabet of parameter names, stored as one rational content factor
  times a primitive integer term map keyed by exponent vectors;
* `RationalFunction`, an unreduced numerator/denominator pair of
  polynomials.

Rational functions are never brought to lowest terms: no multivariate
gcd is ever computed.  Equality is decided by cross-multiplication,
which is exact because polynomials are canonical.  The only
normalizations applied are value preserving and cheap: rational content
extraction, cancellation of a common monomial factor, and folding the
denominator's content into the numerator so denominators are primitive
with positive leading coefficient.

Monomials are ordered lexicographically by exponent vector in the
declared alphabet order.  Scalars from different alphabets never mix;
combining them raises AlphabetMismatch.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Union

from . import kernels
from .errors import AlphabetMismatch, ParseError, PoleAtPoint

_F0 = Fraction(0)
_F1 = Fraction(1)

Rational = Fraction
Scalar = Union[Fraction, "Polynomial", "RationalFunction"]


def _check_alphabet(alphabet) -> tuple:
    alphabet = tuple(alphabet)
    for name in alphabet:
        if not isinstance(name, str) or not name.isidentifier():
            raise ValueError(f"bad parameter name {name!r}")
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("duplicate parameter names")
    return alphabet


class Polynomial:
    """Sparse polynomial with exact rational coefficients.

    The coefficient of an exponent vector e is ``content * terms[e]``
    where `terms` is primitive (integer gcd 1) and its lexicographically
    leading coefficient is positive; the sign and scale live in
    `content`.  The zero polynomial has content 0 and no terms.
    Instances are immutable.
    """

    __slots__ = ("alphabet", "content", "terms", "_hash")

    def __init__(self, alphabet: tuple, content: Fraction, terms: dict):
        # private raw constructor, inputs must already be canonical
        self.alphabet = alphabet
        self.content = content
        self.terms = terms
        self._hash = None

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls, alphabet: Iterable[str]) -> "Polynomial":
        return cls(_check_alphabet(alphabet), _F0, {})

    @classmethod
    def constant(cls, alphabet: Iterable[str], value) -> "Polynomial":
        alphabet = _check_alphabet(alphabet)
        value = Fraction(value)
        if not value:
            return cls(alphabet, _F0, {})
        return cls(alphabet, value, {(0,) * len(alphabet): 1})

    @classmethod
    def variable(cls, alphabet: Iterable[str], name: str) -> "Polynomial":
        alphabet = _check_alphabet(alphabet)
        if name not in alphabet:
            raise ValueError(f"{name!r} is not in the alphabet {alphabet}")
        exp = tuple(1 if v == name else 0 for v in alphabet)
        return cls(alphabet, _F1, {exp: 1})

    @classmethod
    def from_terms(cls, alphabet: Iterable[str], mapping: Mapping) -> "Polynomial":
        """Build from an exponent-vector -> rational coefficient map."""
        alphabet = _check_alphabet(alphabet)
        width = len(alphabet)
        acc: dict = {}
        for exp, coeff in mapping.items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != width or any(x < 0 for x in exp):
                raise ValueError(f"bad exponent vector {exp}")
            coeff = Fraction(coeff)
            if not coeff:
                continue
            prev = acc.get(exp, _F0) + coeff
            if prev:
                acc[exp] = prev
            else:
                acc.pop(exp, None)
        if not acc:
            return cls(alphabet, _F0, {})
        den = 1
        for c in acc.values():
            den = lcm(den, c.denominator)
        ints = {e: int(c * den) for e, c in acc.items()}
        return _canon(alphabet, Fraction(1, den), ints)

    # -- predicates and accessors -------------------------------------

    def is_zero(self) -> bool:
        return not self.content

    def __bool__(self) -> bool:
        return bool(self.content)

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * len(self.alphabet)}

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial."""
        if not self.content:
            return _F0
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.content * self.terms[(0,) * len(self.alphabet)]

    def coefficient(self, exp: tuple) -> Fraction:
        c = self.terms.get(tuple(exp))
        return self.content * c if c is not None else _F0

    def total_degree(self) -> int:
        """Maximum total degree, -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading_exponent(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"alphabets differ: {self.alphabet} vs {other.alphabet}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.alphabet, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.content:
            return other
        if not other.content:
            return self
        c1, c2 = self.content, other.content
        g = Fraction(
            gcd(c1.numerator, c2.numerator), lcm(c1.denominator, c2.denominator)
        )
        t = kernels.poly_axpy(int(c1 / g), self.terms, int(c2 / g), other.terms)
        return _canon(self.alphabet, g, t)

    __radd__ = __add__

    def __neg__(self):
        if not self.content:
            return self
        return Polynomial(self.alphabet, -self.content, self.terms)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.content or not other.content:
            return Polynomial(self.alphabet, _F0, {})
        # Gauss: a product of primitive maps is primitive, and the lex
        # leading coefficient stays positive, so no renormalization.
        t = kernels.poly_mul(self.terms, other.terms)
        return Polynomial(self.alphabet, self.content * other.content, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers take nonnegative integers")
        out = Polynomial.constant(self.alphabet, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            return Polynomial(self.alphabet, self.content / other, self.terms)
        if isinstance(other, Polynomial):
            return RationalFunction.make(self, other)
        return NotImplemented

    def diff(self, name: str) -> "Polynomial":
        """Partial derivative with respect to one parameter."""
        i = self.alphabet.index(name)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1 :]
                out[e2] = out.get(e2, 0) + c * k
        out = {e: c for e, c in out.items() if c}
        return _canon(self.alphabet, self.content, out)

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        """Exact value at a rational point covering the whole alphabet."""
        vals = []
        for name in self.alphabet:
            if name not in point:
                raise ValueError(f"no value for parameter {name!r}")
            vals.append(Fraction(point[name]))
        total = _F0
        for e, c in self.terms.items():
            term = Fraction(c)
            for v, k in zip(vals, e):
                if k:
                    term *= v**k
            total += term
        return self.content * total

    def monomial_shift(self, shift: tuple) -> "Polynomial":
        """Divide every term by the monomial with exponent vector `shift`."""
        if not any(shift):
            return self
        terms = {}
        for e, c in self.terms.items():
            e2 = tuple(x - s for x, s in zip(e, shift))
            if any(x < 0 for x in e2):
                raise ValueError("monomial does not divide every term")
            terms[e2] = c
        return Polynomial(self.alphabet, self.content, terms)

    def min_exponents(self) -> tuple:
        """Componentwise minimum exponent vector over all terms."""
        if not self.terms:
            raise ValueError("zero polynomial")
        it = iter(self.terms)
        lo = list(next(it))
        for e in it:
            for i, x in enumerate(e):
                if x < lo[i]:
                    lo[i] = x
            if not any(lo):
                break
        return tuple(lo)

    # -- comparison and rendering --------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.alphabet, other)
        if isinstance(other, RationalFunction):
            return other == self
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.content == other.content
            and self.terms == other.terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.alphabet, self.content, frozenset(self.terms.items())))
            self._hash = h
        return h

    def __str__(self) -> str:
        if not self.content:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            coeff = self.content * self.terms[e]
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.alphabet, e)
                if k
            )
            if not mono:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = mono
            else:
                body = f"{abs(coeff)}*{mono}"
            parts.append(("- " if coeff < 0 else "+ ") + body)
        text = " ".join(parts)
        if text.startswith("+ "):
            text = text[2:]
        elif text.startswith("- "):
            text = "-" + text[2:]
        return text

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def _canon(alphabet: tuple, scale: Fraction, ints: dict) -> Polynomial:
    """Canonical polynomial from a rational scale and an integer map."""
    if not ints or not scale:
        return Polynomial(alphabet, _F0, {})
    g = kernels.term_gcd(ints)
    if ints[max(ints)] < 0:
        g = -g
    if g != 1:
        ints = {e: c // g for e, c in ints.items()}
    return Polynomial(alphabet, scale * g, ints)


class RationalFunction:
    """Quotient of two polynomials, deliberately kept unreduced.

    The denominator is never the zero polynomial and is normalized to be
    primitive with positive leading coefficient (its content is folded
    into the numerator); a common monomial factor of numerator and
    denominator is cancelled.  No gcd reduction ever happens, so
    structurally different representatives of the same value are normal;
    `==` compares values by cross-multiplication.
    """

    __slots__ = ("alphabet", "num", "den")

    def __init__(self, alphabet: tuple, num: Polynomial, den: Polynomial):
        # private raw constructor, use make()
        self.alphabet = alphabet
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        if num.alphabet != den.alphabet:
            raise AlphabetMismatch(
                f"alphabets differ: {num.alphabet} vs {den.alphabet}"
            )
        if den.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        alphabet = num.alphabet
        if num.is_zero():
            return cls(alphabet, num, Polynomial.constant(alphabet, 1))
        lo_n = num.min_exponents()
        lo_d = den.min_exponents()
        shift = tuple(min(a, b) for a, b in zip(lo_n, lo_d))
        if any(shift):
            num = num.monomial_shift(shift)
            den = den.monomial_shift(shift)
        if den.content != 1:
            num = Polynomial(alphabet, num.content / den.content, num.terms)
            den = Polynomial(alphabet, _F1, den.terms)
        return cls(alphabet, num, den)

    @classmethod
    def constant(cls, alphabet: Iterable[str], value) -> "RationalFunction":
        alphabet = _check_alphabet(alphabet)
        return cls.make(
            Polynomial.constant(alphabet, value), Polynomial.constant(alphabet, 1)
        )

    @classmethod
    def variable(cls, alphabet: Iterable[str], name: str) -> "RationalFunction":
        alphabet = _check_alphabet(alphabet)
        return cls.make(
            Polynomial.variable(alphabet, name), Polynomial.constant(alphabet, 1)
        )

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    # -- arithmetic -----------------------------------------------------

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"alphabets differ: {self.alphabet} vs {other.alphabet}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(self.alphabet, other)
        if isinstance(other, Polynomial):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"alphabets differ: {self.alphabet} vs {other.alphabet}"
                )
            return RationalFunction(
                self.alphabet, other, Polynomial.constant(self.alphabet, 1)
            )
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction.make(self.num + other.num, self.den)
        return RationalFunction.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.alphabet, -self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return RationalFunction.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        return RationalFunction.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("powers take integers")
        if n < 0:
            return RationalFunction.make(self.den, self.num) ** (-n)
        return RationalFunction.make(self.num**n, self.den**n)

    def specialize(self, point: Mapping[str, Fraction]) -> Fraction:
        """Exact value at a rational point; PoleAtPoint on a zero denominator."""
        d = self.den.evaluate(point)
        if not d:
            raise PoleAtPoint(f"denominator {self.den} vanishes at {dict(point)}")
        return self.num.evaluate(point) / d

    # -- comparison and rendering ----------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self._lift(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch(
                f"alphabets differ: {self.alphabet} vs {other.alphabet}"
            )
        return self.num * other.den == other.num * self.den

    __hash__ = None  # unreduced representatives must not be dict keys

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        num = str(self.num)
        den = str(self.den)
        if len(self.num.terms) > 1 or self.num.content < 0:
            num = f"({num})"
        # a product denominator must stay grouped: x/a*p reparses as x*p/a
        if any(ch in den for ch in " */+-"):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


# -- module-level helpers ------------------------------------------------


def as_scalar(value, alphabet: tuple = ()) -> Scalar:
    """Coerce ints and fractions; pass polynomials and quotients through."""
    if isinstance(value, (Polynomial, RationalFunction)):
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise TypeError(f"not a scalar: {value!r}")


def is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return not x
    if isinstance(x, (Polynomial, RationalFunction)):
        return x.is_zero()
    raise TypeError(f"not a scalar: {x!r}")


def equals(x, y) -> bool:
    """Value equality across scalar kinds, by cross-multiplication."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(y, int):
        y = Fraction(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    if isinstance(x, Fraction):
        return y == x
    return x == y


def specialize(x, point: Mapping[str, Fraction]) -> Fraction:
    """Evaluate any scalar kind at a rational point."""
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Polynomial):
        return x.evaluate(point)
    if isinstance(x, RationalFunction):
        return x.specialize(point)
    raise TypeError(f"not a scalar: {x!r}")


def constant_value(x) -> Fraction:
    """The rational value of a constant scalar of any kind."""
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    return x.constant_value()


def scalar_sum(values, alphabet: tuple = None):
    """Sum a sequence of scalars, grouping quotients by equal denominator.

    Grouping keeps unreduced denominators from compounding when many
    addends share structurally identical denominators.
    """
    frac_part = _F0
    poly_part = None
    groups: dict = {}
    order = []
    for v in values:
        if isinstance(v, int):
            v = Fraction(v)
        if isinstance(v, Fraction):
            frac_part += v
        elif isinstance(v, Polynomial):
            poly_part = v if poly_part is None else poly_part + v
        elif isinstance(v, RationalFunction):
            if v.den in groups:
                groups[v.den] = groups[v.den] + v.num
            else:
                groups[v.den] = v.num
                order.append(v.den)
        else:
            raise TypeError(f"not a scalar: {v!r}")
    total = None
    for den in order:
        rf = RationalFunction.make(groups[den], den)
        total = rf if total is None else total + rf
    if poly_part is not None:
        total = poly_part if total is None else total + poly_part
    if total is None:
        return frac_part
    return total if not frac_part else total + frac_part


# -- scalar expression parsing --------------------------------------------


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items = []
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.items.append(("int", text[i:j]))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(("name", text[i:j]))
                i = j
                continue
            if ch in "+-*/^()":
                self.items.append((ch, ch))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r} in {text!r}")
        self.pos = 0

    def peek(self):
        return self.items[self.pos][0] if self.pos < len(self.items) else None

    def take(self):
        item = self.items[self.pos]
        self.pos += 1
        return item


def parse_scalar(text: str, alphabet: Iterable[str] = ()) -> Scalar:
    """Parse an exact scalar expression.

    Grammar: integers, parameter names, + - * / ^, parentheses; ^ takes a
    nonnegative integer exponent and binds tighter than unary minus.
    Returns a Fraction when the alphabet is empty, else a
    RationalFunction over the alphabet.
    """
    alphabet = _check_alphabet(alphabet)
    toks = _Tokens(text)

    def atom():
        kind, val = toks.take() if toks.peek() is not None else (None, None)
        if kind == "int":
            if alphabet:
                return RationalFunction.constant(alphabet, int(val))
            return Fraction(int(val))
        if kind == "name":
            if val not in alphabet:
                raise ParseError(f"unknown parameter {val!r} in {text!r}")
            return RationalFunction.variable(alphabet, val)
        if kind == "(":
            v = expr()
            if toks.peek() != ")":
                raise ParseError(f"missing ')' in {text!r}")
            toks.take()
            return v
        raise ParseError(f"unexpected token in {text!r}")

    def power():
        v = atom()
        if toks.peek() == "^":
            toks.take()
            kind, val = toks.take() if toks.peek() is not None else (None, None)
            if kind != "int":
                raise ParseError(f"'^' needs an integer exponent in {text!r}")
            v = v ** int(val)
        return v

    def factor():
        if toks.peek() == "-":
            toks.take()
            return -factor()
        if toks.peek() == "+":
            toks.take()
            return factor()
        return power()

    def term():
        v = factor()
        while toks.peek() in ("*", "/"):
            op, _ = toks.take()
            w = factor()
            try:
                v = v * w if op == "*" else v / w
            except ZeroDivisionError as exc:
                raise ParseError(f"division by zero in {text!r}") from exc
        return v

    def expr():
        v = term()
        while toks.peek() in ("+", "-"):
            op, _ = toks.take()
            w = term()
            v = v + w if op == "+" else v - w
        return v

    value = expr()
    if toks.peek() is not None:
        raise ParseError(f"trailing input in {text!r}")
    return value


def parse_rational(text: str) -> Fraction:
    """Parse a plain rational expression with no parameters."""
    value = parse_scalar(text, ())
    assert isinstance(value, Fraction)
    return value


def render_scalar(x) -> str:
    """Canonical text rendering used in reports and golden files."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, (Fraction, Polynomial, RationalFunction)):
        return str(x)
    raise TypeError(f"not a scalar: {x!r}")
