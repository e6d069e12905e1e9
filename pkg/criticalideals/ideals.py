import heapq
import logging
import os
from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import ZZ
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm
from sympy.polys.rings import PolyRing

from .config import (
    GROEBNER_STEP_CAP,
    STEP_CAP_ENVIRONMENT_VARIABLE,
    WITNESS_COORDINATES,
    WITNESS_MAX_VARIABLES,
    WITNESS_PRIMES,
)
from .exceptions import PolynomialError, ResourceLimitError
from .zpoly import Polynomial, evaluate, is_unit_constant

logger = logging.getLogger(__name__)
trace_logger = logging.getLogger(__name__ + ".trace")


def step_cap() -> int:
    """Reduction-step cap per basis, overridable through the environment"""
    value = os.environ.get(STEP_CAP_ENVIRONMENT_VARIABLE)
    if value is None:
        return GROEBNER_STEP_CAP
    try:
        cap = int(value)
    except ValueError:
        logger.warning(f"Ignoring non-integer {STEP_CAP_ENVIRONMENT_VARIABLE}={value!r}")
        return GROEBNER_STEP_CAP
    return max(cap, 1)


class _StepCounter(object):
    def __init__(self, cap: Optional[int]):
        self.cap = cap
        self.steps = 0
        self.basis_size = 0

    def tick(self) -> None:
        self.steps += 1
        if self.cap is not None and self.steps > self.cap:
            raise ResourceLimitError(
                f"Groebner basis computation exceeded {self.cap} reduction steps "
                f"(partial basis size {self.basis_size})",
                steps=self.steps,
                basis_size=self.basis_size,
            )


@dataclass(frozen=True)
class GroebnerBasis(object):
    """Strong Groebner basis over the integers

    Leading coefficients are positive and no leading term is strongly
    divisible by the leading term of another element.
    """

    ring: PolyRing
    polys: Tuple[Polynomial, ...]
    steps: int = 0

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    @property
    def is_trivial(self) -> bool:
        return any(is_unit_constant(g) for g in self.polys)

    def contains(self, p: Polynomial) -> bool:
        return not reduce(p, self)


def _normalize(p: Polynomial) -> Polynomial:
    return -p if p.LC < 0 else p


def _check_ring(ring: PolyRing, p: Polynomial) -> None:
    if p.ring != ring:
        raise PolynomialError(
            f"polynomial in {p.ring.symbols} does not share the ring {ring.symbols}"
        )


def _reduce(p: Polynomial, basis: Sequence[Polynomial], counter: _StepCounter) -> Polynomial:
    ring = p.ring
    leading = [g.LT for g in basis]
    remainder: Dict[Tuple[int, ...], int] = {}
    p = p.copy()
    while p:
        monomial, coeff = p.LT
        for g, (g_monomial, g_coeff) in zip(basis, leading):
            if not monomial_divides(g_monomial, monomial):
                continue
            quotient = coeff // g_coeff
            if quotient:
                p = p - g.mul_term((monomial_div(monomial, g_monomial), ZZ(quotient)))
                counter.tick()
                break
        else:
            remainder[monomial] = coeff
            del p[monomial]
    return ring.from_dict(remainder)


def reduce(p: Polynomial, basis: GroebnerBasis) -> Polynomial:
    """Strong remainder of p modulo a basis

    A term c*m is reduced by g when LM(g) divides m and the floor quotient
    c // LC(g) is nonzero; the surviving coefficient lies in [0, LC(g)).

    Args:
        p (Polynomial): polynomial in the basis ring
        basis (GroebnerBasis): strong Groebner basis

    Returns:
        Polynomial: remainder r with p - r in the ideal, zero iff p is a member
    """
    _check_ring(basis.ring, p)
    return _reduce(p, basis.polys, _StepCounter(None))


def _s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    (m1, c1), (m2, c2) = f.LT, g.LT
    m = monomial_lcm(m1, m2)
    coeff_lcm = int(c1) * int(c2) // gcd(int(c1), int(c2))
    return f.mul_term((monomial_div(m, m1), ZZ(coeff_lcm // int(c1)))) - g.mul_term(
        (monomial_div(m, m2), ZZ(coeff_lcm // int(c2)))
    )


def _g_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    (m1, c1), (m2, c2) = f.LT, g.LT
    m = monomial_lcm(m1, m2)
    u, v, _ = ZZ.gcdex(ZZ(int(c1)), ZZ(int(c2)))
    return f.mul_term((monomial_div(m, m1), ZZ(u))) + g.mul_term((monomial_div(m, m2), ZZ(v)))


def _coprime_leading_terms(f: Polynomial, g: Polynomial) -> bool:
    (m1, c1), (m2, c2) = f.LT, g.LT
    monomials_coprime = all(not (a and b) for a, b in zip(m1, m2))
    return monomials_coprime and gcd(int(c1), int(c2)) == 1


def _strongly_divides(f: Polynomial, g: Polynomial) -> bool:
    (m1, c1), (m2, c2) = f.LT, g.LT
    return monomial_divides(m1, m2) and c2 % c1 == 0


def _minimalize(basis: List[Polynomial]) -> Tuple[Polynomial, ...]:
    kept: List[Polynomial] = []
    for idx, g in enumerate(basis):
        redundant = False
        for jdx, h in enumerate(basis):
            if idx == jdx or not _strongly_divides(h, g):
                continue
            # Equal leading terms: keep the earliest element.
            if _strongly_divides(g, h) and idx < jdx:
                continue
            redundant = True
            break
        if not redundant:
            kept.append(g)
    return tuple(kept)


def strong_groebner(
    gens: Sequence[Polynomial],
    ring: Optional[PolyRing] = None,
    cap: Optional[int] = None,
) -> GroebnerBasis:
    """Strong Groebner basis over the integers by Buchberger's algorithm

    Every critical pair contributes its S-polynomial and, when neither
    leading coefficient divides the other, its GCD-polynomial. Pairs are
    processed by smallest lcm degree, ties by pair index. The computation
    stops as soon as a unit constant appears.

    Args:
        gens (Sequence[Polynomial]): generators sharing one ring
        ring (PolyRing, optional): ring of the ideal, needed for an empty generator list
        cap (int, optional): reduction-step cap, defaults to the configured cap

    Raises:
        PolynomialError: generators live in different rings
        ResourceLimitError: the reduction-step cap was exceeded

    Returns:
        GroebnerBasis: basis of the same ideal
    """
    if ring is None:
        if not gens:
            raise PolynomialError("an empty generator list needs an explicit ring")
        ring = gens[0].ring
    for g in gens:
        _check_ring(ring, g)
    counter = _StepCounter(step_cap() if cap is None else cap)

    basis: List[Polynomial] = []
    for g in gens:
        if not g:
            continue
        g = _normalize(g)
        if is_unit_constant(g):
            return GroebnerBasis(ring, (ring.one,), counter.steps)
        if g not in basis:
            basis.append(g)
    counter.basis_size = len(basis)

    pairs: List[Tuple[int, int, int]] = []

    def push_pairs(new: int) -> None:
        for old in range(new):
            degree = sum(monomial_lcm(basis[old].LM, basis[new].LM))
            heapq.heappush(pairs, (degree, old, new))

    for idx in range(len(basis)):
        push_pairs(idx)

    while pairs:
        degree, i, j = heapq.heappop(pairs)
        f, g = basis[i], basis[j]
        candidates = []
        if not _coprime_leading_terms(f, g):
            candidates.append(_s_polynomial(f, g))
        if f.LC % g.LC and g.LC % f.LC:
            candidates.append(_g_polynomial(f, g))
        added = 0
        for candidate in candidates:
            remainder = _reduce(candidate, basis, counter)
            if not remainder:
                continue
            remainder = _normalize(remainder)
            if is_unit_constant(remainder):
                trace_logger.debug(f"pair ({i},{j}) produced a unit after {counter.steps} steps")
                return GroebnerBasis(ring, (ring.one,), counter.steps)
            basis.append(remainder)
            counter.basis_size = len(basis)
            push_pairs(len(basis) - 1)
            added += 1
        trace_logger.debug(
            f"pair ({i},{j}) lcm_degree={degree} added={added} "
            f"basis={len(basis)} steps={counter.steps}"
        )

    result = GroebnerBasis(ring, _minimalize(basis), counter.steps)
    logger.debug(
        f"Strong Groebner basis: {len(gens)} generators -> {len(result)} elements "
        f"in {counter.steps} steps"
    )
    return result


def is_trivial(gens: Sequence[Polynomial], ring: Optional[PolyRing] = None) -> bool:
    """True iff 1 lies in the ideal generated by gens over the integers"""
    if not gens:
        return False
    if any(is_unit_constant(g) for g in gens):
        return True
    return strong_groebner(gens, ring).is_trivial


@dataclass(frozen=True)
class Witness(object):
    """All generators vanish modulo prime at point"""

    prime: int
    point: Tuple[int, ...]


@dataclass(frozen=True)
class TrivialityVerdict(object):
    trivial: bool
    basis_size: int
    witness: Optional[Witness] = None


def find_witness(gens: Sequence[Polynomial]) -> Optional[Witness]:
    """Search a point over Z/p where every generator vanishes

    Such a point proves the ideal is proper. Primes and coordinates come from
    the configured witness grid; failing to find one proves nothing.
    Rings with more than WITNESS_MAX_VARIABLES variables are not searched.
    """
    if not gens:
        return None
    nvars = gens[0].ring.ngens
    if nvars > WITNESS_MAX_VARIABLES:
        logger.debug(f"Witness search skipped for {nvars} variables")
        return None
    for prime in WITNESS_PRIMES:
        for point in product(WITNESS_COORDINATES, repeat=nvars):
            if all(evaluate(g, point) % prime == 0 for g in gens):
                return Witness(prime, tuple(point))
    return None


def decide_triviality(
    gens: Sequence[Polynomial], ring: Optional[PolyRing] = None, witness: bool = False
) -> TrivialityVerdict:
    """Decide triviality and keep the evidence

    Args:
        gens (Sequence[Polynomial]): generators
        ring (PolyRing, optional): ring of the ideal, needed for an empty generator list
        witness (bool, optional): search a mod-p witness point when the ideal is proper

    Returns:
        TrivialityVerdict: verdict, basis size and optional witness
    """
    if any(is_unit_constant(g) for g in gens):
        return TrivialityVerdict(True, 1)
    if not gens:
        return TrivialityVerdict(False, 0)
    basis = strong_groebner(gens, ring)
    if basis.is_trivial:
        if reduce(basis.ring.one, basis):
            raise PolynomialError("unit basis does not reduce 1 to zero")
        return TrivialityVerdict(True, len(basis))
    found = find_witness(gens) if witness else None
    if found is None and witness:
        logger.debug("No mod-p witness found for a proper ideal")
    return TrivialityVerdict(False, len(basis), found)


def ideal_contains(gens: Sequence[Polynomial], p: Polynomial) -> bool:
    if not gens:
        return not p
    return strong_groebner(gens).contains(p)


def ideals_equal(
    first: Sequence[Polynomial],
    second: Sequence[Polynomial],
    ring: Optional[PolyRing] = None,
) -> bool:
    """True iff both generator lists generate the same ideal

    Args:
        first (Sequence[Polynomial]): generators of the first ideal
        second (Sequence[Polynomial]): generators of the second ideal
        ring (PolyRing, optional): common ring, needed when both lists are empty

    Returns:
        bool: mutual containment
    """
    if ring is None:
        if first:
            ring = first[0].ring
        elif second:
            ring = second[0].ring
        else:
            return True
    first_basis = strong_groebner(first, ring)
    second_basis = strong_groebner(second, ring)
    return all(second_basis.contains(p) for p in first) and all(
        first_basis.contains(p) for p in second
    )
