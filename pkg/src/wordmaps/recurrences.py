"""Evaluators for recurrence systems over words.

Four species share the same recursion on the first letter of the argument:
catenative (word values), compositional (endomorphism values), regular
(congruence-classified rules with shift words, evaluated by fuel-bounded
rewriting), and polynomial (bignum values).

Evaluation walks suffixes from the right, carrying the whole value vector,
so each rule is expanded once per suffix even when rules duplicate their
argument.  Regular systems cannot use that scheme (shift words change the
argument), hence the explicit rewriting loop with fuel.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain
from typing import Mapping

from .errors import DomainError, FuelExhaustedError
from .morphisms import Homomorphism, compose
from .polynomials import Polynomial
from .words import Word


def _check_rules_total(indices, alphabet, rules, what):
    for i in indices:
        for a in alphabet:
            if (i, a) not in rules:
                raise DomainError(f"{what} has no rule for ({i!r}, {a!r})")


@dataclass(frozen=True)
class CatenativeSystem:
    """f_i(aw) = f_{a(i,a,1)}(w) ... f_{a(i,a,l)}(w) with word values."""

    indices: tuple[str, ...]
    input_alphabet: frozenset[str]
    output_alphabet: frozenset[str]
    rules: tuple  # sorted ((i, a), (j_1 ... j_l)) pairs
    base: tuple  # sorted (i, word) pairs

    @classmethod
    def make(cls, indices, input_alphabet, output_alphabet, rules: Mapping, base: Mapping):
        indices = tuple(indices)
        input_alphabet = frozenset(input_alphabet)
        output_alphabet = frozenset(output_alphabet)
        _check_rules_total(indices, input_alphabet, rules, "catenative system")
        for (i, a), rhs in rules.items():
            for j in rhs:
                if j not in indices:
                    raise DomainError(f"rule ({i},{a}) mentions unknown index {j!r}")
        for i in indices:
            if i not in base:
                raise DomainError(f"no base value for index {i!r}")
            for b in base[i]:
                if b not in output_alphabet:
                    raise DomainError(f"base of {i!r} uses letter {b!r} outside the output alphabet")
        return cls(
            indices,
            input_alphabet,
            output_alphabet,
            tuple(sorted(((i, a), tuple(rhs)) for (i, a), rhs in rules.items())),
            tuple(sorted((i, tuple(w)) for i, w in base.items())),
        )

    def rule(self, i, a):
        return dict(self.rules)[(i, a)]

    def base_value(self, i):
        return dict(self.base)[i]


@dataclass(frozen=True)
class CompositionalSystem:
    """Same recursion with values in the endomorphisms of a working alphabet;
    the rule product is composition, leftmost factor applying first."""

    indices: tuple[str, ...]
    input_alphabet: frozenset[str]
    working: frozenset[str]
    rules: tuple
    base: tuple  # sorted (i, Homomorphism) pairs

    @classmethod
    def make(cls, indices, input_alphabet, working, rules: Mapping, base: Mapping):
        indices = tuple(indices)
        input_alphabet = frozenset(input_alphabet)
        working = frozenset(working)
        _check_rules_total(indices, input_alphabet, rules, "compositional system")
        for i in indices:
            if i not in base:
                raise DomainError(f"no base homomorphism for index {i!r}")
            h = base[i]
            if h.source != working or not h.target <= working:
                raise DomainError(f"base of {i!r} is not an endomorphism of the working alphabet")
        return cls(
            indices,
            input_alphabet,
            working,
            tuple(sorted(((i, a), tuple(rhs)) for (i, a), rhs in rules.items())),
            tuple(sorted(base.items())),
        )

    def rule(self, i, a):
        return dict(self.rules)[(i, a)]

    def base_value(self, i):
        return dict(self.base)[i]


@dataclass(frozen=True)
class DfaClassifier:
    """A complete deterministic finite-state classifier over an alphabet,
    standing in for a finite-index congruence; supplied by the user, never
    computed from a machine."""

    states: frozenset[str]
    start: str
    transitions: tuple  # sorted ((state, letter), state) pairs
    class_of: tuple  # sorted (state, class) pairs

    @classmethod
    def make(cls, states, start, transitions: Mapping, class_of: Mapping | None = None):
        states = frozenset(states)
        if start not in states:
            raise DomainError(f"start state {start!r} unknown")
        letters = {a for (_, a) in transitions}
        for q in states:
            for a in letters:
                if (q, a) not in transitions:
                    raise DomainError(f"classifier is not complete: missing ({q!r}, {a!r})")
        for (q, a), q2 in transitions.items():
            if q not in states or q2 not in states:
                raise DomainError(f"classifier transition ({q},{a}) -> {q2} uses unknown states")
        if class_of is None:
            class_of = {q: q for q in states}
        return cls(
            states,
            start,
            tuple(sorted(transitions.items())),
            tuple(sorted(class_of.items())),
        )

    @classmethod
    def single_class(cls, alphabet, label="all") -> "DfaClassifier":
        return cls.make({"q"}, "q", {("q", a): "q" for a in alphabet}, {"q": label})

    def classes(self) -> frozenset[str]:
        return frozenset(c for _, c in self.class_of)

    def classify(self, w: Word) -> str:
        trans = dict(self.transitions)
        q = self.start
        for a in w:
            if (q, a) not in trans:
                raise DomainError(f"classifier has no transition for letter {a!r}")
            q = trans[(q, a)]
        return dict(self.class_of)[q]


@dataclass(frozen=True)
class RegularSystem:
    """f_i(aw) = prod_j f_{a(i,a,d,j)}(u_{i,a,d,j} w) for w in class d."""

    indices: tuple[str, ...]
    input_alphabet: frozenset[str]
    output_alphabet: frozenset[str]
    classifier: DfaClassifier
    rules: tuple  # sorted ((i, a, class), ((index, shift word), ...)) pairs
    base: tuple

    @classmethod
    def make(cls, indices, input_alphabet, output_alphabet, classifier, rules: Mapping, base: Mapping):
        indices = tuple(indices)
        input_alphabet = frozenset(input_alphabet)
        output_alphabet = frozenset(output_alphabet)
        for i in indices:
            for a in input_alphabet:
                for d in classifier.classes():
                    if (i, a, d) not in rules:
                        raise DomainError(f"regular system misses rule ({i!r}, {a!r}, class {d!r})")
        for (i, a, d), rhs in rules.items():
            for j, shift in rhs:
                if j not in indices:
                    raise DomainError(f"rule ({i},{a},{d}) mentions unknown index {j!r}")
                for s in shift:
                    if s not in input_alphabet:
                        raise DomainError(f"shift word letter {s!r} outside the input alphabet")
        for i in indices:
            if i not in base:
                raise DomainError(f"no base value for index {i!r}")
        return cls(
            indices,
            input_alphabet,
            output_alphabet,
            classifier,
            tuple(sorted(((i, a, d), tuple((j, tuple(u)) for j, u in rhs)) for (i, a, d), rhs in rules.items())),
            tuple(sorted((i, tuple(w)) for i, w in base.items())),
        )

    def rule(self, i, a, d):
        return dict(self.rules)[(i, a, d)]

    def base_value(self, i):
        return dict(self.base)[i]


@dataclass(frozen=True)
class PolynomialSystem:
    """f_i(aw) = P_{i,a}(f_1(w), ..., f_n(w)) with bignum values.

    The polynomial variables are the index names themselves.  ``ring`` is
    "N" (nonnegative coefficients and bases) or "Z".
    """

    indices: tuple[str, ...]
    input_alphabet: frozenset[str]
    rules: tuple  # sorted ((i, a), Polynomial) pairs
    base: tuple  # sorted (i, int) pairs
    ring: str = "N"

    @classmethod
    def make(cls, indices, input_alphabet, rules: Mapping, base: Mapping, ring="N"):
        indices = tuple(indices)
        input_alphabet = frozenset(input_alphabet)
        if ring not in ("N", "Z"):
            raise DomainError("ring must be 'N' or 'Z'")
        _check_rules_total(indices, input_alphabet, rules, "polynomial system")
        for (i, a), p in rules.items():
            if not p.variables() <= set(indices):
                raise DomainError(
                    f"rule ({i},{a}) uses variables {sorted(p.variables() - set(indices))} "
                    "outside the index set"
                )
            for c in p.terms.values():
                if c.denominator != 1:
                    raise DomainError(f"rule ({i},{a}) has a non-integer coefficient {c}")
                if ring == "N" and c < 0:
                    raise DomainError(f"rule ({i},{a}) has a negative coefficient in ring N")
        for i in indices:
            if i not in base:
                raise DomainError(f"no base value for index {i!r}")
            if ring == "N" and base[i] < 0:
                raise DomainError(f"base of {i!r} is negative in ring N")
        return cls(
            indices,
            input_alphabet,
            tuple(sorted(rules.items())),
            tuple(sorted((i, int(v)) for i, v in base.items())),
            ring,
        )

    def rule(self, i, a) -> Polynomial:
        return dict(self.rules)[(i, a)]

    def base_vector(self) -> dict[str, int]:
        return dict(self.base)

    def maps(self) -> dict[str, dict[str, Polynomial]]:
        """Per-letter update maps a |-> {i: P_{i,a}}."""
        out: dict[str, dict[str, Polynomial]] = {a: {} for a in self.input_alphabet}
        for (i, a), p in self.rules:
            out[a][i] = p
        return out


# ---------------------------------------------------------------------------
# evaluation


def _check_word(sys, w: Word):
    for a in w:
        if a not in sys.input_alphabet:
            raise DomainError(f"letter {a!r} is outside the input alphabet")


def _check_index(sys, i):
    if i not in sys.indices:
        raise DomainError(f"unknown index {i!r}")


def eval_catenative(sys: CatenativeSystem, i: str, w: Word) -> Word:
    _check_index(sys, i)
    _check_word(sys, w)
    rules = dict(sys.rules)
    values = {j: word for j, word in sys.base}
    for a in reversed(w):
        values = {
            j: tuple(chain.from_iterable(values[k] for k in rules[(j, a)]))
            for j in sys.indices
        }
    return values[i]


def eval_compositional(sys: CompositionalSystem, i: str, w: Word) -> Homomorphism:
    _check_index(sys, i)
    _check_word(sys, w)
    rules = dict(sys.rules)
    identity = Homomorphism.identity(sys.working)
    values = dict(sys.base)
    for a in reversed(w):
        nxt = {}
        for j in sys.indices:
            h = identity
            for k in rules[(j, a)]:
                h = compose(h, values[k])
            nxt[j] = h
        values = nxt
    return values[i]


def eval_level3(sys: CompositionalSystem, i: str, w: Word, final: Homomorphism, seed: str) -> Word:
    """f(w) = final(H_i(w)(seed))."""
    if seed not in sys.working:
        raise DomainError(f"seed {seed!r} is not a working letter")
    h = eval_compositional(sys, i, w)
    return final(h((seed,)))


def is_strict(sys: RegularSystem) -> bool:
    """True when all shift words are empty (a sufficient condition for the
    induced rewriting to terminate)."""
    return all(not u for _, rhs in sys.rules for _, u in rhs)


def eval_regular(sys: RegularSystem, i: str, w: Word, fuel: int = 10**5) -> Word:
    """Rewrite f_i(w) until every term is a base case; the class of the tail
    (the argument minus its first letter) selects the rule."""
    _check_index(sys, i)
    _check_word(sys, w)
    rules = dict(sys.rules)
    base = dict(sys.base)
    terms: list[tuple[str, Word]] = [(i, tuple(w))]
    pos = 0
    while True:
        while pos < len(terms) and not terms[pos][1]:
            pos += 1
        if pos == len(terms):
            return tuple(chain.from_iterable(base[j] for j, _ in terms))
        if fuel <= 0:
            raise FuelExhaustedError(
                f"regular evaluation of ({i!r}, {w!r}) did not finish", partial=tuple(terms)
            )
        j, v = terms[pos]
        a, tail = v[0], v[1:]
        d = sys.classifier.classify(tail)
        rhs = rules[(j, a, d)]
        terms[pos:pos + 1] = [(k, u + tail) for k, u in rhs]
        fuel -= 1


def eval_polynomial(sys: PolynomialSystem, i: str, w: Word) -> int:
    _check_index(sys, i)
    return eval_polynomial_vector(sys, w)[i]


def eval_polynomial_vector(sys: PolynomialSystem, w: Word) -> dict[str, int]:
    _check_word(sys, w)
    rules = dict(sys.rules)
    values = {j: v for j, v in sys.base}
    for a in reversed(w):
        values = {j: rules[(j, a)].evaluate_int(values) for j in sys.indices}
    return values


# ---------------------------------------------------------------------------
# embeddings between species


def catenative_to_regular(sys: CatenativeSystem) -> RegularSystem:
    """View a catenative system as a regular one: a single congruence class
    and empty shift words."""
    classifier = DfaClassifier.single_class(sys.input_alphabet)
    (label,) = classifier.classes()
    rules = {
        (i, a, label): tuple((j, ()) for j in rhs) for (i, a), rhs in sys.rules
    }
    return RegularSystem.make(
        sys.indices, sys.input_alphabet, sys.output_alphabet, classifier, rules, dict(sys.base)
    )
