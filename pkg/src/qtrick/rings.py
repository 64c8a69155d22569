"""Involutive ring actions on a polarized lattice.

A ring ``O`` with involution ``*`` is represented by its image: a set of named
integral matrices ``iota(e)``.  The involution is forced by the polarization
(Rosati): ``iota(e*) = E^{-1} iota(e)^T E``.

Ring elements are addressed by *words*: integer combinations and products of
generator names such as ``"i"``, ``"2*i - 1"`` or ``"i*j*i"``.  Words are
evaluated left to right.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .abelian import PolarizedLattice
from .errors import (
    DependentGenerators,
    InvolutionMismatch,
    NonIntegralRosati,
    UnknownGenerator,
)
from .exact_linalg import IntMatrix, Matrix, RatMatrix, block_diag, inv, rank

IDENTITY_NAME = "1"


def rosati(E: Matrix, M: Matrix) -> RatMatrix:
    """``E^{-1} M^T E``, the unique ``M*`` with ``E M = (M*)^T E``."""
    return (inv(E) @ M.T @ E).to_rat()


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class RingAction:
    X: PolarizedLattice
    generators: Mapping[str, IntMatrix]
    star_images: Mapping[str, IntMatrix] | None = None

    @cached_property
    def validated(self) -> "ActionReport":
        return validate_action(self)


@dataclass(frozen=True)
class ActionReport:
    star_images: dict[str, IntMatrix]
    identity_names: tuple[str, ...]
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def validate_action(A: RingAction) -> ActionReport:
    E = A.X.E
    r = E.nrows
    Id = IntMatrix.identity(r)
    given = dict(A.star_images or {})
    stars: dict[str, IntMatrix] = {}
    identity_names = []
    checks = []
    for name, M in A.generators.items():
        if name == IDENTITY_NAME and M != Id:
            raise InvolutionMismatch(f"generator {name!r} is reserved for the identity")
        if M.shape != (r, r):
            raise ValueError(f"generator {name!r} has shape {M.shape}, expected {(r, r)}")
        if M == Id:
            identity_names.append(name)
        R = rosati(E, M)
        if not R.is_integral():
            raise NonIntegralRosati(f"Rosati image of {name!r} is not integral")
        R = R.to_int()
        if name in given and given[name] != R:
            raise InvolutionMismatch(f"declared star image of {name!r} differs from the Rosati image")
        if rosati(E, R) != M:
            raise InvolutionMismatch(f"Rosati map is not involutive on {name!r}")
        if E @ M != R.T @ E:
            raise InvolutionMismatch(f"lambda o iota({name}) != iota({name}*)^t o lambda")
        stars[name] = R
    unknown = set(given) - set(A.generators)
    if unknown:
        raise UnknownGenerator(f"star image given for unknown generator(s) {sorted(unknown)}")
    checks.append(Check("rosati_integral", True))
    checks.append(Check("lambdaO", True, f"{len(stars)} generator(s)"))

    others = [M for n, M in A.generators.items() if n not in identity_names]
    vecs = [sum(M.rows, ()) for M in [Id, *others]]
    if rank(IntMatrix(vecs)) != len(vecs):
        raise DependentGenerators("identity and generators are Z-linearly dependent")
    checks.append(Check("generators_independent", True, f"rank {len(vecs)}"))
    return ActionReport(stars, tuple(identity_names), checks)


# -- words --------------------------------------------------------------------

def _parse(word: str) -> ast.expr:
    try:
        tree = ast.parse(word.strip(), mode="eval")
    except SyntaxError as exc:
        raise UnknownGenerator(f"cannot parse word {word!r}") from exc
    return tree.body


def _eval(node, mats: Mapping[str, Matrix], star_mats: Mapping[str, Matrix] | None, r: int):
    """Evaluate a word AST; with ``star_mats`` given, evaluate the starred word."""
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return IntMatrix.identity(r).scale(node.value)
    if isinstance(node, ast.Name):
        table = star_mats if star_mats is not None else mats
        if node.id not in table:
            raise UnknownGenerator(f"unknown generator {node.id!r}")
        return table[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval(node.operand, mats, star_mats, r)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
        a = _eval(node.left, mats, star_mats, r)
        b = _eval(node.right, mats, star_mats, r)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        # (ab)* = b* a*
        return b @ a if star_mats is not None else a @ b
    raise UnknownGenerator(f"unsupported word syntax: {ast.dump(node)}")


def _tables(A: RingAction):
    mats = dict(A.generators)
    stars = dict(A.validated.star_images)
    mats.setdefault(IDENTITY_NAME, IntMatrix.identity(A.X.rank))
    stars.setdefault(IDENTITY_NAME, IntMatrix.identity(A.X.rank))
    return mats, stars


def iota(A: RingAction, word: str) -> IntMatrix:
    """The matrix ``iota(word)``."""
    mats, _ = _tables(A)
    return _eval(_parse(word), mats, None, A.X.rank)


def iota_of_star(A: RingAction, word: str) -> IntMatrix:
    """``iota(word*)``, computed structurally from the generators' star images."""
    mats, stars = _tables(A)
    return _eval(_parse(word), mats, stars, A.X.rank)


def iota_star(A: RingAction, word: str) -> IntMatrix:
    """The dual action ``e -> iota(e*)^T`` on ``X^t``."""
    return iota_of_star(A, word).T


def delta_m(M: Matrix, m: int) -> Matrix:
    """Diagonal embedding ``Id_m (x) M`` into ``End(X^m)``."""
    if m < 1:
        raise ValueError("m must be positive")
    return block_diag(*([M] * m))


def kappa4_from(m: Matrix, m_star: Matrix) -> Matrix:
    """``diag(Delta_4(m_star^T), Delta_4(m))``: dual factor first, then ``X^4``."""
    return block_diag(delta_m(m_star.T, 4), delta_m(m, 4))


def kappa4(A: RingAction, word: str) -> IntMatrix:
    return kappa4_from(iota(A, word), iota_of_star(A, word))


# -- standard quadratic models ---------------------------------------------------

# 2x2 blocks; each is Rosati-compatible with any multiple of J = [[0, 1], [-1, 0]]
RING_MODELS: dict[str, dict[str, IntMatrix]] = {
    "integers": {},
    "gauss": {"i": IntMatrix([[0, -1], [1, 0]])},
    "sqrt_minus2": {"w": IntMatrix([[0, -2], [1, 0]])},
    "zeta3": {"z": IntMatrix([[0, -1], [1, -1]])},
}
