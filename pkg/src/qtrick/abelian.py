"""Lattice model of polarized abelian varieties.

An abelian variety ``X`` is reduced to its lattice ``L = Z^{2g}``; a
polarization ``lambda`` is a nondegenerate integral alternating matrix ``E``
(the map ``L -> L^dual`` in basis / dual-basis coordinates).  Homomorphisms
are integral matrices, the dual of a homomorphism is its transpose, and the
kernel of an isogeny ``M`` is the finite group ``M^{-1} Z^r / Z^r``.

The Riemann form on ``ker(lambda)`` is modeled by ``e(u, v) = u^T E v mod Z``.
Only this sign convention is fixed; it is not claimed to agree with the
analytic normalization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from operator import mul
from typing import Sequence

from .errors import Degenerate, NotAlternating, NotASubgroupOfKernel, NotInKernel, OddRank
from .exact_linalg import (
    IntMatrix,
    Matrix,
    RatMatrix,
    block_diag,
    det,
    hnf,
    inv,
    lattice_equal,
    snf,
    symplectic_type,
)


@dataclass(frozen=True)
class PolarizedLattice:
    """A rank-``2g`` lattice with a nondegenerate integral alternating form."""

    E: IntMatrix

    @property
    def rank(self) -> int:
        return self.E.nrows

    @property
    def g(self) -> int:
        return self.E.nrows // 2

    @cached_property
    def degree(self) -> int:
        return abs(det(self.E))

    @cached_property
    def type(self) -> tuple[int, ...]:
        return symplectic_type(self.E)


def make_polarized(E: Matrix) -> PolarizedLattice:
    if not isinstance(E, IntMatrix):
        if not E.is_integral():
            raise NotAlternating("polarization form must be integral")
        E = E.to_int()
    if not E.is_square:
        raise OddRank(f"form must be square, got {E.shape}")
    if not E.is_alternating():
        raise NotAlternating("form is not alternating (E^T != -E)")
    if E.nrows % 2 or E.nrows == 0:
        raise OddRank(f"form must have positive even rank, got {E.nrows}")
    X = PolarizedLattice(E)
    if X.degree == 0:
        raise Degenerate("form is degenerate (det E = 0)")
    _ = X.type
    return X


def degree(X: PolarizedLattice) -> int:
    return X.degree


def power_polarization(X: PolarizedLattice, m: int) -> PolarizedLattice:
    """``lambda^m`` on ``X^m``: block-diagonal copies of ``E`` in copy-major order."""
    if m < 1:
        raise ValueError("m must be positive")
    return PolarizedLattice(block_diag(*([X.E] * m)))


@dataclass(frozen=True)
class Morphism:
    """A homomorphism ``Z^source_rank -> Z^target_rank`` (or a Q-isogeny when rational)."""

    M: Matrix

    @property
    def source_rank(self) -> int:
        return self.M.ncols

    @property
    def target_rank(self) -> int:
        return self.M.nrows

    @property
    def is_homomorphism(self) -> bool:
        return self.M.is_integral()

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.M @ other.M)


def dual_morphism(u: Morphism) -> Morphism:
    # in dual coordinates the dual map is the transpose
    return Morphism(u.M.T)


def _frac_mod1(x: Fraction) -> Fraction:
    return Fraction(x) % 1


@dataclass(frozen=True)
class FiniteQuotient:
    """The finite group ``(Z^r + span(generators)) / Z^r``.

    Build instances with :meth:`generated_by`, which stores canonical
    generators (one per nontrivial invariant factor, reduced into ``[0, 1)``).
    """

    ambient_rank: int
    generators: RatMatrix
    invariant_factors: tuple[int, ...]

    @classmethod
    def generated_by(cls, ambient_rank: int, gens: Sequence[Sequence] | Matrix) -> "FiniteQuotient":
        if isinstance(gens, Matrix):
            cols = gens.columns()
        else:
            cols = [tuple(Fraction(x) for x in c) for c in gens]
        cols = [c for c in cols if any(Fraction(x).denominator != 1 for x in c)]
        r = ambient_rank
        if not cols:
            return cls(r, RatMatrix.zeros(r, 0), ())
        den = math.lcm(*(Fraction(x).denominator for c in cols for x in c))
        big = IntMatrix.identity(r).scale(den).hstack(RatMatrix.from_columns(cols).scale(den).to_int())
        H, _ = hnf(big)
        # den * Z^r = H @ C
        C = (inv(H).scale(den)).to_int()
        res = snf(C)
        basis = H @ inv(res.U).to_int()
        gens_out = []
        factors = []
        for i, s in enumerate(res.diagonal):
            if s > 1:
                factors.append(s)
                gens_out.append(tuple(_frac_mod1(Fraction(x, den)) for x in basis.column(i)))
        return cls(r, RatMatrix.from_columns(gens_out, nrows=r) if gens_out else RatMatrix.zeros(r, 0), tuple(factors))

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def lifts(self) -> list[tuple[Fraction, ...]]:
        return self.generators.columns()

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def overlattice_generators(self) -> RatMatrix:
        """Columns spanning ``Z^r + span(generators)``."""
        return IntMatrix.identity(self.ambient_rank).to_rat().hstack(self.generators)

    def same_subgroup(self, other: "FiniteQuotient") -> bool:
        if self.ambient_rank != other.ambient_rank or self.invariant_factors != other.invariant_factors:
            return False
        return lattice_equal(self.overlattice_generators(), other.overlattice_generators())


def kernel_of_isogeny(M: Matrix) -> FiniteQuotient:
    """``M^{-1} Z^r / Z^r`` for a square integral matrix of nonzero determinant."""
    return FiniteQuotient.generated_by(M.ncols, inv(M))


def kernel_of_polarization(X: PolarizedLattice) -> FiniteQuotient:
    return kernel_of_isogeny(X.E)


def is_killed_by(H: FiniteQuotient, n: int) -> bool:
    return all((n * Fraction(x)).denominator == 1 for c in H.lifts() for x in c)


def _in_kernel(E: Matrix, u: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in E.apply(u))


def riemann_pairing(E: Matrix, u: Sequence, v: Sequence) -> Fraction:
    """``u^T E v mod Z`` for lifts ``u, v`` of points of ``ker(E)``."""
    u = [Fraction(x) for x in u]
    v = [Fraction(x) for x in v]
    if not _in_kernel(E, u) or not _in_kernel(E, v):
        raise NotInKernel("pairing arguments must lie in the kernel of the form")
    return _frac_mod1(sum(map(mul, u, E.apply(v))))


class Isotropy(enum.Enum):
    NOT_ISOTROPIC = "not_isotropic"
    ISOTROPIC = "isotropic"
    MAXIMAL_ISOTROPIC = "maximal_isotropic"


def subgroup_isotropy(E: Matrix, H: FiniteQuotient) -> Isotropy:
    gens = [[Fraction(x) for x in c] for c in H.lifts()]
    images = []
    for h in gens:
        Eh = E.apply(h)
        if any(x.denominator != 1 for x in Eh):
            raise NotASubgroupOfKernel("generator does not lie in ker(E)")
        images.append(Eh)
    for i, u in enumerate(gens):
        for Ev in images[i + 1:]:
            if _frac_mod1(sum(map(mul, u, Ev))):
                return Isotropy.NOT_ISOTROPIC
    if H.order**2 == abs(det(E)):
        return Isotropy.MAXIMAL_ISOTROPIC
    return Isotropy.ISOTROPIC
