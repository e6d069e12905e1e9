import pytest
from sympy.polys.polyerrors import ExactQuotientFailed

from criticalideals.critical import critical_ideal_gens
from criticalideals.exceptions import PolynomialError, ResourceLimitError
from criticalideals.ideals import (
    GroebnerBasis,
    decide_triviality,
    find_witness,
    ideal_contains,
    ideals_equal,
    is_trivial,
    reduce,
    step_cap,
    strong_groebner,
)
from criticalideals.zpoly import change_order, evaluate, polynomial_ring


@pytest.fixture
def ring():
    return polynomial_ring(3)


def test_integer_constants(ring):
    assert is_trivial([ring(2), ring(3)])
    assert not is_trivial([ring(2), ring(4)])
    basis = strong_groebner([ring(6), ring(10)])
    assert basis.polys == (ring(2),)


def test_unit_generator_short_circuits(ring):
    x0 = ring.gens[0]
    assert is_trivial([x0, -ring.one])
    assert strong_groebner([x0 * 5, ring.one]).polys == (ring.one,)


def test_coefficients_matter_over_the_integers(ring):
    x0 = ring.gens[0]
    assert is_trivial([2 * x0 + 1, 2 * x0])
    assert not is_trivial([2 * x0, 2 * ring.gens[1]])


def test_gcd_polynomial_combines_coprime_leading_coefficients(ring):
    x0, x1, _ = ring.gens
    assert strong_groebner([2 * x0, 3 * x0]).polys == (x0,)
    assert strong_groebner([4 * x0 * x1, 6 * x1]).polys == (6 * x1, 2 * x0 * x1)


def test_generalized_laplacian_of_two_cycle(ring):
    x0, x1, _ = ring.gens
    assert not is_trivial([x0 * x1 - 1])
    assert is_trivial([x0 * x1 - 1, x0])


def test_generators_reduce_to_zero(ring):
    x0, x1, x2 = ring.gens
    gens = [x0 * x1 - 2, 3 * x1 * x2 + x0, x0**2 - x2, 2 * x1 + 4]
    basis = strong_groebner(gens)
    assert isinstance(basis, GroebnerBasis)
    assert not basis.is_trivial
    for g in gens:
        assert not reduce(g, basis)
        assert basis.contains(g * x2 + g)
    assert all(g.LC > 0 for g in basis)


def test_basis_is_minimal(ring):
    x0, x1, _ = ring.gens
    basis = strong_groebner([x0, 2 * x0, x0 * x1, 3 * x1])
    leading = [g.LT for g in basis]
    for i, (m1, c1) in enumerate(leading):
        for j, (m2, c2) in enumerate(leading):
            if i == j:
                continue
            divides = all(a <= b for a, b in zip(m1, m2)) and c2 % c1 == 0
            assert not divides


def test_remainder_coefficients_stay_below_leading_coefficient(ring):
    x0, x1, _ = ring.gens
    basis = strong_groebner([3 * x0 + x1])
    remainder = reduce(7 * x0, basis)
    assert remainder == 7 * x0 - 2 * (3 * x0 + x1)
    assert remainder.coeff(x0) == 1


def test_triviality_does_not_depend_on_generator_order(ring):
    x0, x1, x2 = ring.gens
    samples = [
        [x0 * x1 - 1, x1 * x2, x2 + x0 - 1],
        [2 * x0 + 3, x0 * x1 - x2, x1 + x2],
        [x0 * x1 * x2 - 1, x0 + x1, x1 + x2, x0 + x2],
        [x0**2 - 2, x1**2 - 3, x0 * x1],
    ]
    for gens in samples:
        expected = is_trivial(gens)
        assert is_trivial(list(reversed(gens))) == expected
        assert is_trivial(gens[1:] + gens[:1]) == expected


def test_empty_ideal(ring):
    assert not is_trivial([])
    assert strong_groebner([], ring).polys == ()
    with pytest.raises(PolynomialError):
        strong_groebner([])


def test_mixed_rings_are_rejected(ring):
    other = polynomial_ring(2)
    with pytest.raises(PolynomialError):
        strong_groebner([ring.gens[0], other.gens[0]])


def test_step_cap_raises(ring):
    x0, x1, x2 = ring.gens
    # the first pair reduces x1 - x2 by x1
    with pytest.raises(ResourceLimitError) as excinfo:
        strong_groebner([x0 + x1, x0 + x2, x1], cap=0)
    assert excinfo.value.steps == 1
    assert excinfo.value.basis_size == 3


def test_step_cap_environment_override(monkeypatch):
    monkeypatch.setenv("CRITICAL_IDEALS_STEP_CAP", "50")
    assert step_cap() == 50
    monkeypatch.setenv("CRITICAL_IDEALS_STEP_CAP", "many")
    assert step_cap() == 10**6
    monkeypatch.delenv("CRITICAL_IDEALS_STEP_CAP")
    assert step_cap() == 10**6


def test_witness_for_proper_ideal(ring):
    x0, x1, _ = ring.gens
    gens = [x0 * x1 - 1, 2 * x0]
    verdict = decide_triviality(gens, witness=True)
    assert not verdict.trivial
    assert verdict.witness is not None
    assert verdict.witness.prime == 2
    assert all(evaluate(g, verdict.witness.point) % 2 == 0 for g in gens)


def test_verdict_for_trivial_ideal(ring):
    x0 = ring.gens[0]
    verdict = decide_triviality([x0 + 1, x0], witness=True)
    assert verdict.trivial
    assert verdict.witness is None
    assert find_witness([ring.one]) is None


def test_membership_and_equality(ring):
    x0, x1, _ = ring.gens
    assert ideal_contains([x0, x1], x0 * x1 + 3 * x1)
    assert not ideal_contains([x0, 2 * x1], x1)
    assert ideals_equal([x0 + 1, x1 + 1], [x0 - x1, x1 + 1])
    assert not ideals_equal([(x0 + 1) * (x1 + 1)], [x0 + 1, x1 + 1])
    assert ideals_equal([], [], ring)


def test_small_examples():
    ring = polynomial_ring(2)
    x0, x1 = ring.gens
    assert strong_groebner([x0, x0 + 1]).is_trivial
    basis = strong_groebner([ring(2), x0])
    assert len(basis) == 2
    assert ring(2) in basis.polys and x0 in basis.polys
    assert not basis.is_trivial
    assert reduce(ring.one, basis) == ring.one
    assert not reduce(x0 * x1, strong_groebner([x0]))
    assert is_trivial([x0, x1, -ring.one])
    assert not is_trivial([x0 * x1])
    assert ideals_equal([x0], [x0, x0**2])
    assert not ideals_equal([x0], [x1])


def _random_multilinear(rng, ring, terms=3, bound=3):
    p = ring.zero
    for _ in range(terms):
        monomial = ring.one
        for x in ring.gens:
            if rng.random() < 0.5:
                monomial *= x
        p += rng.randint(-bound, bound) * monomial
    return p


def _sample_ideals(classes, rng):
    samples = [
        critical_ideal_gens(d, i) for d in classes if d.n <= 3 for i in range(1, d.n + 1)
    ]
    ring = polynomial_ring(3)
    for _ in range(25):
        gens = [_random_multilinear(rng, ring) for _ in range(rng.randint(2, 3))]
        samples.append([g for g in gens if g])
    return [gens for gens in samples if gens]


def test_verdicts_do_not_depend_on_monomial_order(classes_up_to_4, rng):
    for gens in _sample_ideals(classes_up_to_4, rng):
        lex = [change_order(g, "lex") for g in gens]
        assert is_trivial(lex) == is_trivial(gens)
        x0 = gens[0].ring.gens[0]
        same = list(reversed(gens)) + [x0 * gens[0] - gens[-1]]
        wider = gens + [x0]
        for other in (same, wider):
            expected = ideals_equal(gens, other)
            assert ideals_equal(lex, [change_order(g, "lex") for g in other]) == expected
        assert ideals_equal(gens, same)


def test_basis_of_a_basis_is_unchanged(classes_up_to_4, rng):
    for gens in _sample_ideals(classes_up_to_4, rng):
        basis = strong_groebner(gens)
        again = strong_groebner(list(basis.polys), basis.ring)
        assert again.polys == basis.polys
        assert ideals_equal(list(again.polys), gens)


def test_principal_membership_is_exact_divisibility(ring, rng):
    x0 = ring.gens[0]
    assert not ideal_contains([2 * x0], x0)
    assert ideal_contains([2 * x0], 4 * x0**2)
    for _ in range(40):
        f = _random_multilinear(rng, ring)
        if not f:
            continue
        q = _random_multilinear(rng, ring)
        r = _random_multilinear(rng, ring, terms=1) if rng.random() < 0.5 else ring.zero
        p = f * q + r
        try:
            p.exquo(f)
            divisible = True
        except ExactQuotientFailed:
            divisible = False
        assert ideal_contains([f], p) == divisible
