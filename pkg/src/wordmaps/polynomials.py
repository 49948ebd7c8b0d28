"""Exact multivariate polynomials over the rationals.

Terms map monomials to nonzero Fraction coefficients; a monomial is a sorted
tuple of (variable, exponent) pairs with positive exponents.  Operations on
polynomials with different variable sets just work: the variable universe of
an expression is the union of what occurs in it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import DomainError, ParseError

Monomial = tuple[tuple[str, int], ...]

MONO_ONE: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in out.items() if e))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_divides(a: Monomial, b: Monomial) -> bool:
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) - e
        if out[v] < 0:
            raise DomainError("monomial division with remainder")
    return tuple(sorted((v, e) for v, e in out.items() if e))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    out = dict(a)
    for v, e in b:
        out[v] = max(out.get(v, 0), e)
    return tuple(sorted(out.items()))


Scalar = Union[int, Fraction]


class Polynomial:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls({MONO_ONE: Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): Fraction(1)})

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self.terms for v, _ in m)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == MONO_ONE for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        return self.terms.get(MONO_ONE, Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = _coerce(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, Fraction(0)) + c
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        out = Polynomial.__new__(Polynomial)
        object.__setattr__(out, "terms", res)
        object.__setattr__(out, "_hash", None)
        return out

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial()
            return Polynomial({m: c * other for m, c in self.terms.items()})
        res: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = res.get(m, Fraction(0)) + c1 * c2
                if s:
                    res[m] = s
                else:
                    res.pop(m, None)
        out = Polynomial.__new__(Polynomial)
        object.__setattr__(out, "terms", res)
        object.__setattr__(out, "_hash", None)
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative polynomial power")
        out = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(tuple(sorted(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                if v not in point:
                    raise DomainError(f"no value for variable {v!r}")
                val *= Fraction(point[v]) ** e
            total += val
        return total

    def evaluate_int(self, point: Mapping[str, int]) -> int:
        # pure machine-int fast path when everything in sight is integral
        total = 0
        for m, c in self.terms.items():
            if c.denominator != 1:
                break
            val = c.numerator
            for v, e in m:
                x = point.get(v)
                if not isinstance(x, int):
                    break
                val *= x ** e
            else:
                total += val
                continue
            break
        else:
            return total
        val = self.evaluate(point)
        if val.denominator != 1:
            raise DomainError("evaluation did not produce an integer")
        return val.numerator

    def substitute(self, env: Mapping[str, "Polynomial"]) -> "Polynomial":
        out = Polynomial()
        for m, c in self.terms.items():
            part = Polynomial.const(c)
            passthrough: dict = {}
            for v, e in m:
                if v in env:
                    part = part * (env[v] ** e)
                else:
                    passthrough[(v, e)] = None
            if passthrough:
                mono = tuple(sorted(k for k in passthrough))
                part = part * Polynomial({mono: Fraction(1)})
            out = out + part
        return out

    def __repr__(self):
        return format_polynomial(self)


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.const(x)
    raise TypeError(f"cannot treat {x!r} as a polynomial")


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for m in sorted(p.terms, key=lambda m: (-mono_degree(m), m)):
        c = p.terms[m]
        factors = [f"{v}^{e}" if e > 1 else v for v, e in m]
        if not factors:
            body = str(abs(c))
        else:
            body = " * ".join(factors)
            if abs(c) != 1:
                body = f"{abs(c)} * {body}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    sign, body = parts[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------------------------
# expression parser: + - * ^ ( ) over integer literals and identifiers


def _tokenize_expr(text: str):
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "+-*^()":
            yield c, i
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            yield text[i:j], i
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            yield text[i:j], i
            i = j
        else:
            raise ParseError(f"unexpected character {c!r} in expression", column=i + 1)


def parse_polynomial(text: str, variables: Iterable[str] | None = None) -> Polynomial:
    """Parse an expression like ``2 * X1^2 + X2 - 3``.

    When a variable universe is given, unknown identifiers are rejected.
    """
    tokens = list(_tokenize_expr(text))
    allowed = None if variables is None else set(variables)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def atom() -> Polynomial:
        tok = peek()
        if tok is None:
            raise ParseError("expression ended unexpectedly")
        if tok == "(":
            take()
            p = expr()
            if peek() != ")":
                raise ParseError("missing ')'", column=tokens[pos - 1][1] + 1)
            take()
            return p
        if tok == "-":
            take()
            return -atom()
        value, at = take()
        if value.isdigit():
            return Polynomial.const(int(value))
        if value[0].isalpha() or value[0] == "_":
            if allowed is not None and value not in allowed:
                raise ParseError(f"unknown variable {value!r}", column=at + 1)
            return Polynomial.var(value)
        raise ParseError(f"unexpected token {value!r}", column=at + 1)

    def power() -> Polynomial:
        p = atom()
        while peek() == "^":
            take()
            tok, at = take() if pos < len(tokens) else (None, -1)
            if tok is None or not tok.isdigit():
                raise ParseError("'^' must be followed by a nonnegative integer", column=at + 1)
            p = p ** int(tok)
        return p

    def product() -> Polynomial:
        p = power()
        while peek() == "*":
            take()
            p = p * power()
        return p

    def expr() -> Polynomial:
        p = product()
        while peek() in ("+", "-"):
            op, _ = take()
            q = product()
            p = p + q if op == "+" else p - q
        return p

    p = expr()
    if pos < len(tokens):
        tok, at = tokens[pos]
        raise ParseError(f"unexpected token {tok!r}", column=at + 1)
    return p
