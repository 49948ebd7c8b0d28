"""Buchberger Groebner bases, normal forms, elimination, and intersections.

Polynomials are converted to dense exponent tuples over an explicit variable
sequence for the duration of a computation.  Supported monomial orders:
grevlex (default), lex, and the block orders used for elimination (the
dropped block is compared first, so the basis splits off the elimination
ideal).  Bases are reduced and auto-reduced, and the output is deterministic
given the generator list, the variable sequence, and the order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceededError, DomainError
from .polynomials import Polynomial

Exps = tuple[int, ...]


def _lex_key(e: Exps):
    return e


def _grevlex_key(e: Exps):
    return (sum(e), tuple(-x for x in reversed(e)))


def _make_key(order: str, nvars: int, block: int = 0):
    if order == "lex":
        return _lex_key
    if order == "grevlex":
        return _grevlex_key
    if order == "block-grevlex":
        return lambda e: (_grevlex_key(e[:block]), _grevlex_key(e[block:]))
    raise DomainError(f"unknown monomial order {order!r}")


def _to_internal(p: Polynomial, variables: Sequence[str]) -> dict[Exps, Fraction]:
    index = {v: i for i, v in enumerate(variables)}
    out: dict[Exps, Fraction] = {}
    for mono, c in p.terms.items():
        exps = [0] * len(variables)
        for v, e in mono:
            if v not in index:
                raise DomainError(f"variable {v!r} missing from the variable sequence")
            exps[index[v]] = e
        out[tuple(exps)] = c
    return out


def _from_internal(d: dict[Exps, Fraction], variables: Sequence[str]) -> Polynomial:
    terms = {}
    for exps, c in d.items():
        mono = tuple((variables[i], e) for i, e in enumerate(exps) if e)
        terms[mono] = c
    return Polynomial(terms)


def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def _lcm_exps(a: Exps, b: Exps) -> Exps:
    return tuple(max(x, y) for x, y in zip(a, b))


def _lt(d: dict[Exps, Fraction], key) -> Exps:
    return max(d, key=key)


def _reduce(p: dict, basis: list[dict], key) -> dict:
    """Full multivariate division remainder of p by the basis."""
    lts = [(_lt(g, key), g) for g in basis if g]
    work = dict(p)
    rem: dict[Exps, Fraction] = {}
    while work:
        t = _lt(work, key)
        c = work[t]
        for g_lt, g in lts:
            if _divides(g_lt, t):
                shift = _sub_exps(t, g_lt)
                ratio = c / g[g_lt]
                for m, gc in g.items():
                    mm = _add_exps(m, shift)
                    s = work.get(mm, Fraction(0)) - ratio * gc
                    if s:
                        work[mm] = s
                    else:
                        work.pop(mm, None)
                break
        else:
            rem[t] = c
            del work[t]
    return rem


def _spoly(f: dict, g: dict, key) -> dict:
    lf, lg = _lt(f, key), _lt(g, key)
    l = _lcm_exps(lf, lg)
    out: dict[Exps, Fraction] = {}
    for m, c in f.items():
        mm = _add_exps(m, _sub_exps(l, lf))
        out[mm] = out.get(mm, Fraction(0)) + c / f[lf]
    for m, c in g.items():
        mm = _add_exps(m, _sub_exps(l, lg))
        s = out.get(mm, Fraction(0)) - c / g[lg]
        if s:
            out[mm] = s
        else:
            out.pop(mm, None)
    return {m: c for m, c in out.items() if c}


def _buchberger(gens: list[dict], key, max_basis: Optional[int] = None) -> list[dict]:
    G = [g for g in gens if g]
    pairs = {(i, j) for i in range(len(G)) for j in range(i)}
    done: set[tuple[int, int]] = set()
    while pairs:
        i, j = min(pairs, key=lambda ij: key(_lcm_exps(_lt(G[ij[0]], key), _lt(G[ij[1]], key))))
        pairs.discard((i, j))
        done.add((i, j))
        lti, ltj = _lt(G[i], key), _lt(G[j], key)
        lcm = _lcm_exps(lti, ltj)
        # product criterion: coprime leading terms reduce to zero
        if lcm == _add_exps(lti, ltj):
            continue
        # chain criterion
        skip = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if _divides(_lt(G[k], key), lcm):
                pik = (max(i, k), min(i, k))
                pjk = (max(j, k), min(j, k))
                if pik in done and pjk in done:
                    skip = True
                    break
        if skip:
            continue
        r = _reduce(_spoly(G[i], G[j], key), G, key)
        if r:
            G.append(r)
            if max_basis is not None and len(G) > max_basis:
                raise BudgetExceededError(
                    f"Groebner basis exceeded the size budget ({max_basis})"
                )
            new = len(G) - 1
            pairs |= {(new, t) for t in range(new)}
    return G


def _interreduce(G: list[dict], key) -> list[dict]:
    G = [g for g in G if g]
    # drop generators whose leading term another one divides
    changed = True
    while changed:
        changed = False
        for i in range(len(G)):
            others = G[:i] + G[i + 1:]
            if not others:
                continue
            r = _reduce(G[i], others, key)
            if r != G[i]:
                changed = True
                if r:
                    G[i] = r
                else:
                    del G[i]
                break
    out = []
    for g in G:
        lc = g[_lt(g, key)]
        out.append({m: c / lc for m, c in g.items()})
    out.sort(key=lambda g: key(_lt(g, key)), reverse=True)
    return out


def default_variables(polys: Iterable[Polynomial]) -> tuple[str, ...]:
    vs: set[str] = set()
    for p in polys:
        vs |= p.variables()
    return tuple(sorted(vs))


def groebner(
    gens: Iterable[Polynomial],
    variables: Optional[Sequence[str]] = None,
    order: str = "grevlex",
    block: int = 0,
    max_basis: Optional[int] = None,
) -> list[Polynomial]:
    """The reduced, auto-reduced, monic Groebner basis of the given ideal."""
    gens = list(gens)
    if variables is None:
        variables = default_variables(gens)
    key = _make_key(order, len(variables), block)
    internal = [_to_internal(p, variables) for p in gens if not p.is_zero()]
    if not internal:
        return []
    G = _buchberger(internal, key, max_basis)
    G = _interreduce(G, key)
    return [_from_internal(g, variables) for g in G]


def s_polynomial(
    f: Polynomial, g: Polynomial, variables: Optional[Sequence[str]] = None, order: str = "grevlex"
) -> Polynomial:
    if variables is None:
        variables = default_variables([f, g])
    key = _make_key(order, len(variables))
    return _from_internal(_spoly(_to_internal(f, variables), _to_internal(g, variables), key), variables)


def normal_form(
    p: Polynomial,
    basis: Iterable[Polynomial],
    variables: Optional[Sequence[str]] = None,
    order: str = "grevlex",
    block: int = 0,
) -> Polynomial:
    """Division remainder of p by a basis (unique when the basis is Groebner
    for the order).  Fresh variables of p extend the sequence at the end,
    which preserves the order among the old monomials."""
    basis = list(basis)
    if variables is None:
        variables = default_variables(basis)
    extra = sorted(p.variables() - set(variables))
    variables = tuple(variables) + tuple(extra)
    key = _make_key(order, len(variables), block)
    internal = [_to_internal(g, variables) for g in basis if not g.is_zero()]
    return _from_internal(_reduce(_to_internal(p, variables), internal, key), variables)


class Ideal:
    """A polynomial ideal given by generators, with a cached reduced basis."""

    def __init__(self, generators: Iterable[Polynomial], variables=None):
        self.generators = tuple(g for g in generators if not g.is_zero())
        self._variables = None if variables is None else tuple(variables)
        self._cache: dict = {}

    def variables(self) -> tuple[str, ...]:
        if self._variables is not None:
            return self._variables
        return default_variables(self.generators)

    def groebner_basis(self, order: str = "grevlex", max_basis=None) -> list[Polynomial]:
        key = (order, self.variables())
        if key not in self._cache:
            self._cache[key] = groebner(
                self.generators, self.variables(), order, max_basis=max_basis
            )
        return self._cache[key]

    def contains(self, p: Polynomial, order: str = "grevlex") -> bool:
        if p.is_zero():
            return True
        if not self.generators:
            return False
        basis = self.groebner_basis(order)
        return normal_form(p, basis, self.variables(), order).is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def same_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators) and all(
            other.contains(g) for g in self.generators
        )

    def __repr__(self):
        gens = ", ".join(repr(g) for g in self.generators) or "0"
        return f"<{gens}>"


def ideal_membership(p: Polynomial, ideal: Ideal, order: str = "grevlex") -> bool:
    return ideal.contains(p, order)


def eliminate(ideal: Ideal, drop: Iterable[str], max_basis=None) -> Ideal:
    """The intersection with the subring that omits the dropped variables,
    via a block order putting the dropped block first."""
    drop = set(drop)
    keep = [v for v in ideal.variables() if v not in drop]
    dropped = sorted(drop & set(ideal.variables()))
    if not dropped:
        return Ideal(ideal.generators, keep)
    variables = tuple(dropped) + tuple(keep)
    basis = groebner(
        ideal.generators, variables, order="block-grevlex", block=len(dropped), max_basis=max_basis
    )
    kept = [g for g in basis if g.variables() <= set(keep)]
    return Ideal(kept, keep)


def _fresh_var(taken, stem="t"):
    name = f"_{stem}"
    n = 0
    while name in taken:
        n += 1
        name = f"_{stem}{n}"
    return name


def ideal_intersect(i: Ideal, j: Ideal, max_basis=None) -> Ideal:
    """t*I + (1-t)*J, then eliminate t."""
    vs = set(i.variables()) | set(j.variables())
    t = _fresh_var(vs)
    tp = Polynomial.var(t)
    gens = [tp * g for g in i.generators] + [(Polynomial.const(1) - tp) * g for g in j.generators]
    combined = Ideal(gens, tuple([t] + sorted(vs)))
    return eliminate(combined, {t}, max_basis=max_basis)


def in_radical(p: Polynomial, ideal: Ideal, max_basis=None) -> bool:
    """Rabinowitsch trick: p is in the radical iff 1 lies in the ideal
    extended with 1 - z*p for a fresh z."""
    if p.is_zero():
        return True
    vs = set(ideal.variables()) | p.variables()
    z = _fresh_var(vs, "z")
    gens = list(ideal.generators) + [Polynomial.const(1) - Polynomial.var(z) * p]
    basis = groebner(gens, tuple(sorted(vs)) + (z,), order="grevlex", max_basis=max_basis)
    return any(g.is_constant() and not g.is_zero() for g in basis)
