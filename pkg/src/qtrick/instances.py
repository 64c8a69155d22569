"""Instance and report files, plus the seeded random-instance generator.

Both file kinds are JSON documents tagged ``"version": "qtrick-1"``.  Every
integer is written as a decimal string and every rational as ``"p/q"`` so
that no reader needs native bignums.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .abelian import PolarizedLattice, make_polarized
from .errors import (
    BadMatrixShape,
    BadType,
    MalformedJson,
    NonIntegerEntry,
    RingIncompatible,
)
from .exact_linalg import IntMatrix, block_diag, inv, standard_symplectic
from .rings import IDENTITY_NAME, RING_MODELS, RingAction, iota

VERSION = "qtrick-1"
J2 = IntMatrix([[0, 1], [-1, 0]])


@dataclass(frozen=True)
class ActionEntry:
    name: str
    matrix: IntMatrix
    star: str | IntMatrix | None = None  # a word, or the matrix of iota(e*)


@dataclass(frozen=True)
class Instance:
    E: IntMatrix
    action: tuple[ActionEntry, ...] = ()
    quaternion_override: tuple[int, int, int, int] | None = None

    @property
    def rank(self) -> int:
        return self.E.nrows

    def polarized(self) -> PolarizedLattice:
        return make_polarized(self.E)

    def ring_action(self) -> RingAction:
        X = self.polarized()
        gens = {a.name: a.matrix for a in self.action}
        base = RingAction(X, gens)
        stars = {}
        for a in self.action:
            if a.star is None:
                continue
            stars[a.name] = a.star if isinstance(a.star, IntMatrix) else iota(base, a.star)
        return RingAction(X, gens, stars or None)


# -- serialization ------------------------------------------------------------------

def _int_str(x: int) -> str:
    return str(int(x))


def _rat_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_json(M, rational: bool = False) -> list[list[str]]:
    conv = _rat_str if rational else _int_str
    return [[conv(x) for x in row] for row in M.rows]


def _parse_int(s: Any, where: str) -> int:
    if not isinstance(s, str):
        raise NonIntegerEntry(f"{where}: expected a decimal string, got {type(s).__name__}")
    t = s.strip()
    body = t[1:] if t[:1] in "+-" else t
    if not body.isdigit() or not body.isascii():
        raise NonIntegerEntry(f"{where}: {s!r} is not an integer")
    return int(t)


def matrix_from_json(rows: Any, where: str, shape: tuple[int, int] | None = None) -> IntMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise BadMatrixShape(f"{where}: matrix must be an array of rows")
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise BadMatrixShape(f"{where}: ragged rows")
    if shape is not None and (len(rows), ncols) != shape:
        raise BadMatrixShape(f"{where}: expected shape {shape}, got {(len(rows), ncols)}")
    return IntMatrix(
        [[_parse_int(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)], ncols
    )


def instance_to_dict(inst: Instance) -> dict:
    action = []
    for a in inst.action:
        entry: dict[str, Any] = {"name": a.name, "matrix": matrix_to_json(a.matrix)}
        if isinstance(a.star, IntMatrix):
            entry["star"] = matrix_to_json(a.star)
        elif a.star is not None:
            entry["star"] = a.star
        action.append(entry)
    out: dict[str, Any] = {
        "version": VERSION,
        "rank": _int_str(inst.rank),
        "E": matrix_to_json(inst.E),
        "action": action,
    }
    if inst.quaternion_override is not None:
        out["quaternion_override"] = dict(zip("abcd", map(_int_str, inst.quaternion_override)))
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def serialize_instance(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def parse_instance(data: bytes | str) -> Instance:
    """Parse and shape-check an instance document.

    Mathematical validation (alternation, Rosati compatibility) happens when
    the instance is turned into a lattice and an action.
    """
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedJson(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedJson("top level must be an object")
    if doc.get("version") != VERSION:
        raise MalformedJson(f"version must be {VERSION!r}, got {doc.get('version')!r}")
    for key in ("rank", "E"):
        if key not in doc:
            raise MalformedJson(f"missing field {key!r}")
    rank = doc["rank"]
    rank = _parse_int(rank, "rank") if isinstance(rank, str) else rank
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 2 or rank % 2:
        raise BadMatrixShape(f"rank: must be a positive even integer, got {doc['rank']!r}")
    E = matrix_from_json(doc["E"], "E", (rank, rank))

    action = []
    raw_action = doc.get("action", [])
    if not isinstance(raw_action, list):
        raise MalformedJson("action: must be an array")
    seen = set()
    for k, entry in enumerate(raw_action):
        where = f"action[{k}]"
        if not isinstance(entry, dict) or "name" not in entry or "matrix" not in entry:
            raise MalformedJson(f"{where}: needs 'name' and 'matrix'")
        name = entry["name"]
        if not isinstance(name, str) or not (name.isidentifier() or name == IDENTITY_NAME):
            raise MalformedJson(f"{where}.name: {name!r} is not a valid generator name")
        if name in seen:
            raise MalformedJson(f"{where}.name: duplicate generator {name!r}")
        seen.add(name)
        M = matrix_from_json(entry["matrix"], f"{where}.matrix", (rank, rank))
        star = entry.get("star")
        if isinstance(star, list):
            star = matrix_from_json(star, f"{where}.star", (rank, rank))
        elif star is not None and not isinstance(star, str):
            raise MalformedJson(f"{where}.star: must be a word or a matrix")
        action.append(ActionEntry(name, M, star))

    override = doc.get("quaternion_override")
    if override is not None:
        if not isinstance(override, dict) or set(override) != set("abcd"):
            raise MalformedJson("quaternion_override: needs exactly the keys a, b, c, d")
        override = tuple(_parse_int(override[k], f"quaternion_override.{k}") for k in "abcd")
    return Instance(E, tuple(action), override)


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(serialize_instance(inst).encode()).hexdigest()


# -- reports ------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportFile:
    digest: str
    s: int
    quadruple: tuple[int, int, int, int]
    V_order: int
    V_invariant_factors: tuple[int, ...]
    checks: tuple[tuple[str, bool, str], ...]
    I: IntMatrix | None = None
    pi: IntMatrix | None = None
    mu: IntMatrix | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def overall(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def report_from_result(inst: Instance, result, with_matrices: bool = True) -> ReportFile:
    return ReportFile(
        digest=instance_digest(inst),
        s=result.squares.s,
        quadruple=result.squares.quadruple,
        V_order=result.V.order,
        V_invariant_factors=result.V.invariant_factors,
        checks=tuple((c.name, c.ok, c.detail) for c in result.report),
        I=result.I if with_matrices else None,
        pi=result.pi if with_matrices else None,
        mu=result.mu if with_matrices else None,
    )


def report_to_dict(rep: ReportFile) -> dict:
    out: dict[str, Any] = {
        "version": VERSION,
        "instance_digest": rep.digest,
        "s": _int_str(rep.s),
        "quadruple": dict(zip("abcd", map(_int_str, rep.quadruple))),
        "V": {"order": _int_str(rep.V_order), "invariant_factors": [_int_str(x) for x in rep.V_invariant_factors]},
        "checks": [{"name": n, "status": "pass" if ok else "fail", "detail": d} for n, ok, d in rep.checks],
        "overall": "pass" if rep.overall else "fail",
    }
    for key in ("I", "pi", "mu"):
        M = getattr(rep, key)
        if M is not None:
            out[key] = matrix_to_json(M)
    return out


def serialize_report(rep: ReportFile) -> str:
    return dumps(report_to_dict(rep))


def parse_report(data: bytes | str) -> ReportFile:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedJson(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != VERSION:
        raise MalformedJson("not a qtrick-1 report")
    try:
        checks = tuple((c["name"], c["status"] == "pass", c["detail"]) for c in doc["checks"])
        mats = {k: matrix_from_json(doc[k], k) for k in ("I", "pi", "mu") if k in doc}
        return ReportFile(
            digest=doc["instance_digest"],
            s=_parse_int(doc["s"], "s"),
            quadruple=tuple(_parse_int(doc["quadruple"][k], f"quadruple.{k}") for k in "abcd"),
            V_order=_parse_int(doc["V"]["order"], "V.order"),
            V_invariant_factors=tuple(_parse_int(x, "V.invariant_factors") for x in doc["V"]["invariant_factors"]),
            checks=checks,
            **mats,
        )
    except (KeyError, TypeError) as exc:
        raise MalformedJson(f"missing or malformed report field: {exc}") from exc


# -- generator ----------------------------------------------------------------------

def random_unimodular(r: int, rng: random.Random, steps: int | None = None) -> IntMatrix:
    """Product of ``steps`` elementary matrices ``Id + c e_ij`` with ``c`` in ``[-3, 3]``."""
    steps = 20 * r * r if steps is None else steps
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    if r < 2:
        return IntMatrix(U)
    for _ in range(steps):
        i, j = rng.sample(range(r), 2)
        c = rng.choice((-3, -2, -1, 1, 2, 3))
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
    return IntMatrix(U)


def generate_instance(g: int, type_: tuple[int, ...], ring: str, seed: int, steps: int | None = None) -> Instance:
    """Seeded instance of polarization type ``type_`` with a standard ring action.

    The form starts as ``d_1 J + ... + d_g J`` (one 2x2 block per factor), the
    ring's 2x2 model is installed on every block, and everything is conjugated
    by a random unimodular ``U``: ``E -> U^T E U``, ``M -> U^{-1} M U``.
    """
    if g < 1 or len(type_) != g:
        raise BadType(f"type must have exactly g={g} entries, got {type_}")
    if any(d < 1 for d in type_):
        raise BadType("type entries must be positive")
    if any(b % a for a, b in zip(type_, type_[1:])):
        raise BadType(f"type must be a divisibility chain, got {type_}")
    if ring not in RING_MODELS:
        raise RingIncompatible(f"unknown ring {ring!r}; choose from {sorted(RING_MODELS)}")
    rng = random.Random(f"qtrick:{g}:{','.join(map(str, type_))}:{ring}:{seed}")
    E0 = block_diag(*(J2.scale(d) for d in type_))
    U = random_unimodular(2 * g, rng, steps)
    Uinv = inv(U).to_int()
    E = U.T @ E0 @ U
    action = [ActionEntry(IDENTITY_NAME, IntMatrix.identity(2 * g))]
    for name, M in RING_MODELS[ring].items():
        action.append(ActionEntry(name, Uinv @ block_diag(*([M] * g)) @ U))
    return Instance(E, tuple(action))


def standard_instance(type_: tuple[int, ...]) -> Instance:
    """Unconjugated ``[[0, D], [-D, 0]]`` form with the trivial action."""
    E = standard_symplectic(type_)
    return Instance(E, (ActionEntry(IDENTITY_NAME, IntMatrix.identity(E.nrows)),))
