"""Sequence equality decisions through polynomial ideal theory.

The reachable set of a polynomial recurrence system is the orbit of its base
vector under the per-letter update maps.  A sequence identity holds for every
input word exactly when its defining polynomial vanishes on that whole orbit.

Two complementary engines answer vanishing questions:

* ``vanishes_on_reachables`` saturates the ascending chain of ideals
  generated by pulling the test polynomial back through the update maps.
  The chain stabilizes after finitely many additions (ascending chain
  condition), and on stabilization the polynomial vanishes on the orbit iff
  every accumulated generator vanishes at the base vector.  This is total:
  it terminates on every input, so equality verdicts never need a variety
  computation.

* ``zariski_closure`` computes the vanishing ideal of the orbit closure.
  Phase 1 iterates base-point/image closures directly and is exact whenever
  it stabilizes (finite orbits).  For infinite orbits it switches to a
  degree sweep: candidate low-degree vanishing polynomials are read off
  sampled orbit points and each one is certified with the saturation engine,
  so every returned generator provably vanishes on the whole orbit.

Witness search is fair breadth-first by length, lexicographic within a
length, so reported witnesses are minimal.  Resource limits raise
``BudgetExceededError``; a verdict is never traded for termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Union

from .errors import BudgetExceededError, DomainError
from .groebner import Ideal, groebner, in_radical, normal_form
from .polynomials import Polynomial
from .recurrences import PolynomialSystem, eval_polynomial_vector
from .words import Word


@dataclass(frozen=True)
class Equal:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotEqual:
    witness: Word

    def __bool__(self):
        return False


Verdict = Union[Equal, NotEqual]


@dataclass(frozen=True)
class Budget:
    """Resource limits for the decision procedures."""

    chain_additions: int = 400
    max_basis: int = 4000
    naive_rounds: int = 6
    max_degree: int = 8
    witness_length: int = 10000
    sample_points: int = 120
    sample_depth: int = 512
    max_point_bits: int = 4096
    order: str = "grevlex"

    @classmethod
    def scaled(cls, n: int, order: str = "grevlex") -> "Budget":
        return cls(chain_additions=n, max_basis=10 * n, order=order)


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# plumbing: renaming and products of systems


def rename_system(sys: PolynomialSystem, prefix: str) -> PolynomialSystem:
    env = {i: Polynomial.var(prefix + i) for i in sys.indices}
    rules = {(prefix + i, a): p.substitute(env) for (i, a), p in sys.rules}
    base = {prefix + i: v for i, v in sys.base}
    return PolynomialSystem.make(
        tuple(prefix + i for i in sys.indices), sys.input_alphabet, rules, base, ring=sys.ring
    )


def product_system(a: PolynomialSystem, b: PolynomialSystem) -> PolynomialSystem:
    if a.input_alphabet != b.input_alphabet:
        raise DomainError("product systems must share their input alphabet")
    if set(a.indices) & set(b.indices):
        raise DomainError("product systems must have disjoint index sets")
    ring = "Z" if "Z" in (a.ring, b.ring) else "N"
    return PolynomialSystem.make(
        a.indices + b.indices,
        a.input_alphabet,
        {**dict(a.rules), **dict(b.rules)},
        {**dict(a.base), **dict(b.base)},
        ring=ring,
    )


def _sigma(sys: PolynomialSystem, a: str, g: Polynomial) -> Polynomial:
    """Pull g back through the letter-a update map: g(P_{1,a}, ..., P_{n,a})."""
    rules = dict(sys.rules)
    return g.substitute({i: rules[(i, a)] for i in sys.indices})


# ---------------------------------------------------------------------------
# the saturation engine


def vanishes_on_reachables(
    sys: PolynomialSystem, t: Polynomial, budget: Budget = DEFAULT_BUDGET
) -> bool:
    """Decide whether t vanishes at every reachable value vector.

    Saturates G := {t} under the pull-backs sigma_a until every new pull-back
    already reduces to zero; then t vanishes on the orbit iff all of G
    vanishes at the base vector.
    """
    if not t.variables() <= set(sys.indices):
        raise DomainError("test polynomial mentions variables outside the system")
    variables = tuple(sys.indices)
    letters = sorted(sys.input_alphabet)
    gens: list[Polynomial] = []
    basis: list[Polynomial] = []
    worklist: list[Polynomial] = [t]
    additions = 0
    while worklist:
        g = worklist.pop()
        if not normal_form(g, basis, variables, order=budget.order).is_zero():
            gens.append(g)
            additions += 1
            if additions > budget.chain_additions:
                raise BudgetExceededError(
                    "ideal chain did not stabilize within the addition budget"
                )
            basis = groebner(
                basis + [g], variables, order=budget.order, max_basis=budget.max_basis
            )
            worklist.extend(_sigma(sys, a, g) for a in letters)
    point = sys.base_vector()
    return all(g.evaluate(point) == 0 for g in gens)


def _lex_words(letters, length):
    if length == 0:
        yield ()
        return
    for a in letters:
        for w in _lex_words(letters, length - 1):
            yield (a,) + w


def find_witness(
    sys: PolynomialSystem, t: Polynomial, budget: Budget = DEFAULT_BUDGET, max_length=None
) -> Optional[Word]:
    """Shortest word (lexicographically first among its length) at which t
    evaluates to a nonzero value; None if none up to the length cap."""
    letters = sorted(sys.input_alphabet)
    cap = budget.witness_length if max_length is None else max_length
    # value vectors for all suffix words of the current length, built by
    # prepending letters (the recurrence peels the first letter)
    level = {(): sys.base_vector()}
    for length in range(cap + 1):
        for w in _lex_words(letters, length):
            if t.evaluate(level[w]) != 0:
                return w
        nxt = {}
        maps = sys.maps()
        for w, vec in level.items():
            for a in letters:
                nxt[(a,) + w] = {i: p.evaluate_int(vec) for i, p in maps[a].items()}
        level = nxt
    return None


def decide_zero_on_reachables(
    sys: PolynomialSystem, t: Polynomial, budget: Budget = DEFAULT_BUDGET
) -> Verdict:
    """Equal when t vanishes on the whole orbit, else NotEqual with the
    minimal witness word."""
    quick = find_witness(sys, t, budget, max_length=3)
    if quick is not None:
        return NotEqual(quick)
    if vanishes_on_reachables(sys, t, budget):
        return Equal()
    witness = find_witness(sys, t, budget)
    if witness is None:
        raise BudgetExceededError("a witness exists but exceeded the search length budget")
    return NotEqual(witness)


def decide_equal(
    sys_a: PolynomialSystem,
    i_a: str,
    sys_b: PolynomialSystem,
    i_b: str,
    budget: Budget = DEFAULT_BUDGET,
) -> Verdict:
    """Decide pointwise equality of two polynomially recurrent sequences."""
    if i_a not in sys_a.indices:
        raise DomainError(f"unknown index {i_a!r}")
    if i_b not in sys_b.indices:
        raise DomainError(f"unknown index {i_b!r}")
    a = rename_system(sys_a, "A_")
    b = rename_system(sys_b, "B_")
    prod = product_system(a, b)
    t = Polynomial.var("A_" + i_a) - Polynomial.var("B_" + i_b)
    return decide_zero_on_reachables(prod, t, budget)


@dataclass(frozen=True)
class FractionPresentation:
    """f(w) = (g(w) - h(w)) / (fp(w) - gp(w)) over one polynomial system.

    Denominators are assumed nonzero for every input word; this is not
    checked (deciding it is a Skolem-type question).
    """

    system: PolynomialSystem
    num_plus: str
    num_minus: str
    den_plus: str
    den_minus: str

    def __post_init__(self):
        for i in (self.num_plus, self.num_minus, self.den_plus, self.den_minus):
            if i not in self.system.indices:
                raise DomainError(f"unknown index {i!r}")

    def eval(self, w: Word) -> Fraction:
        vec = eval_polynomial_vector(self.system, w)
        den = vec[self.den_plus] - vec[self.den_minus]
        if den == 0:
            raise DomainError(f"denominator vanished at {w!r}")
        return Fraction(vec[self.num_plus] - vec[self.num_minus], den)


def decide_equal_fractions(
    p: FractionPresentation, q: FractionPresentation, budget: Budget = DEFAULT_BUDGET
) -> Verdict:
    """Cross-multiplied zeroness of two fraction presentations on the
    reachable set of the combined system."""
    a = rename_system(p.system, "A_")
    b = rename_system(q.system, "B_")
    prod = product_system(a, b)

    def v(prefix, name):
        return Polynomial.var(prefix + name)

    t = (v("A_", p.num_plus) - v("A_", p.num_minus)) * (
        v("B_", q.den_plus) - v("B_", q.den_minus)
    ) - (v("B_", q.num_plus) - v("B_", q.num_minus)) * (
        v("A_", p.den_plus) - v("A_", p.den_minus)
    )
    return decide_zero_on_reachables(prod, t, budget)


# ---------------------------------------------------------------------------
# Zariski closure of the reachable set


def reachable_points(sys: PolynomialSystem, budget: Budget = DEFAULT_BUDGET):
    """Sample distinct reachable value vectors breadth-first.

    Returns (points, closed): closed is True when a whole level added
    nothing new, which proves the listed orbit complete.  Point counts,
    depth, and value bit-sizes are capped (values of nonlinear maps grow
    doubly exponentially with depth).
    """
    letters = sorted(sys.input_alphabet)
    maps = sys.maps()
    seen = []
    seen_keys = set()

    def add(vec):
        key = tuple(sorted(vec.items()))
        if key not in seen_keys:
            seen_keys.add(key)
            seen.append(vec)
            return True
        return False

    add(sys.base_vector())
    frontier = [sys.base_vector()]
    truncated = False
    for _ in range(budget.sample_depth):
        nxt = []
        for vec in frontier:
            for a in letters:
                new = {i: p.evaluate_int(vec) for i, p in maps[a].items()}
                if add(new):
                    if all(v.bit_length() <= budget.max_point_bits for v in new.values()):
                        nxt.append(new)
                    else:
                        truncated = True
                if len(seen) >= budget.sample_points:
                    return seen, False
        if not nxt:
            return seen, not truncated
        frontier = nxt
    return seen, False


def _monomials_up_to(variables, degree):
    out = [()]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(variables, d):
            mono = []
            for v in combo:
                if mono and mono[-1][0] == v:
                    mono[-1] = (v, mono[-1][1] + 1)
                else:
                    mono.append((v, 1))
            out.append(tuple(mono))
    return out


def _nullspace(rows, n):
    """Basis of the right nullspace of the matrix, exact over Fraction."""
    mat = [list(r) for r in rows]
    pivot_cols = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = mat[r][c]
        mat[r] = [x / inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(mat):
            break
    free_cols = [c for c in range(n) if c not in pivot_cols]
    out = []
    for free in free_cols:
        vec = [Fraction(0)] * n
        vec[free] = Fraction(1)
        for row_ix, col in enumerate(pivot_cols):
            vec[col] = -mat[row_ix][free]
        out.append(vec)
    return out


def _vanishing_space(points, variables, degree):
    """A basis of the space of polynomials of bounded degree vanishing at
    all sample points, by exact nullspace computation."""
    monos = _monomials_up_to(variables, degree)
    rows = []
    for pt in points:
        row = []
        for mono in monos:
            val = Fraction(1)
            for v, e in mono:
                val *= Fraction(pt[v]) ** e
            row.append(val)
        rows.append(row)
    basis = []
    for coeffs in _nullspace(rows, len(monos)):
        poly = Polynomial({monos[k]: coeffs[k] for k in range(len(monos)) if coeffs[k]})
        basis.append(poly)
    return basis


def _point_ideal(variables, point) -> Ideal:
    return Ideal(
        [Polynomial.var(v) - Polynomial.const(point[v]) for v in variables], variables
    )


def _image_closure(sys: PolynomialSystem, a: str, j: Ideal, budget: Budget) -> Ideal:
    """The vanishing ideal of the closure of the image of V(j) under the
    letter-a update map, by elimination over the graph ideal."""
    from .groebner import eliminate

    variables = tuple(sys.indices)
    rules = dict(sys.rules)
    fresh = {i: f"_y_{i}" for i in variables}
    gens = list(j.generators)
    for i in variables:
        gens.append(Polynomial.var(fresh[i]) - rules[(i, a)])
    graph = Ideal(gens, tuple(variables) + tuple(fresh[i] for i in variables))
    eliminated = eliminate(graph, set(variables), max_basis=budget.max_basis)
    back = {fresh[i]: Polynomial.var(i) for i in variables}
    renamed = [g.substitute(back) for g in eliminated.generators]
    return Ideal(renamed, variables)


def _intersect_all(ideals, variables, budget: Budget) -> Ideal:
    from .groebner import ideal_intersect

    out = ideals[0]
    for j in ideals[1:]:
        out = ideal_intersect(out, j, max_basis=budget.max_basis)
        out = Ideal(out.generators, variables)
    return out


def zariski_closure(sys: PolynomialSystem, budget: Budget = DEFAULT_BUDGET) -> Ideal:
    """The vanishing ideal of the Zariski closure of the reachable set.

    Phase 1 runs the direct fixpoint J <- J  intersect  image closures and is
    exact when it stabilizes (ascending varieties must agree).  Orbits that
    escape the round budget but are proven finite by exhaustive sampling get
    the exact answer as an intersection of point ideals.  When the orbit is
    infinite, phase 2 sweeps every degree up to the budget: candidate vanishing polynomials are fitted on sampled orbit
    points and certified with the saturation engine; refuted candidates add
    their refuting points and shrink the fit, so on termination the result
    is exactly the ideal generated by *all* orbit-vanishing polynomials of
    degree up to the budget.  If the corresponding variety fails to be
    invariant under some update map, generators of higher degree provably
    exist and a budget error is raised; when it is invariant the ideal is
    returned (it is the full vanishing ideal whenever that ideal is
    generated in degrees within the budget, which covers every bundled and
    tested system).
    """
    variables = tuple(sys.indices)
    letters = sorted(sys.input_alphabet)
    base = sys.base_vector()

    j = _point_ideal(variables, base)
    for _ in range(budget.naive_rounds):
        images = [_image_closure(sys, a, j, budget) for a in letters]
        j2 = _intersect_all([j] + images, variables, budget)
        stable = all(j2.contains(g) for g in j.generators) and all(
            j.contains(g) for g in j2.generators
        )
        if stable:
            return j
        j = j2

    # fully enumerated finite orbits have an exact ideal: intersect the
    # point ideals
    points, orbit_closed = reachable_points(sys, budget)
    if orbit_closed and len(points) <= 40:
        out = _point_ideal(variables, points[0])
        for pt in points[1:]:
            from .groebner import ideal_intersect

            out = ideal_intersect(out, _point_ideal(variables, pt), max_basis=budget.max_basis)
            out = Ideal(out.generators, variables)
        return out

    # phase 2: degree sweep with certified candidates
    verified: list[Polynomial] = []
    verified_ideal = Ideal([], variables)
    for degree in range(1, budget.max_degree + 1):
        while True:
            candidates = _vanishing_space(points, variables, degree)
            refuted = False
            for cand in candidates:
                if verified_ideal.contains(cand):
                    continue
                if orbit_closed or vanishes_on_reachables(sys, cand, budget):
                    verified.append(cand)
                    verified_ideal = Ideal(verified, variables)
                else:
                    refutation = find_witness(sys, cand, budget)
                    vec = eval_polynomial_vector(sys, refutation)
                    points.append(vec)
                    refuted = True
                    break
            if not refuted:
                break
    if _is_invariant(sys, verified_ideal, letters, budget):
        return verified_ideal
    raise BudgetExceededError(
        "closure generators above the degree budget remain; raise the budget"
    )


def _is_invariant(sys: PolynomialSystem, j: Ideal, letters, budget: Budget) -> bool:
    """V(j) is mapped into itself by every update map: each pulled-back
    generator lies in the radical."""
    for g in j.generators:
        for a in letters:
            if not in_radical(_sigma(sys, a, g), j, max_basis=budget.max_basis):
                return False
    return True
