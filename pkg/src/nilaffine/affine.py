"""Affine representations on the algebra level and their verification.

An :class:`AffineRep` sends each source basis vector X_i to a pair
(t_i, D_i): a translation vector in the target algebra and a derivation
of it, extended linearly to all of the source. The pair is a point in
the semidirect sum of the target with its derivation algebra, and the
representation is the differential of an affine action candidate.

Two facts get decided here, both exactly. First, whether the assignment
is a Lie algebra homomorphism into the semidirect sum. Second, whether
it satisfies the simple-transitivity criteria: the translation map is a
linear bijection and every linear part in the span of the D_i is
nilpotent. The nilpotency half is certified in one shot by a common
strict flag for the whole family (see :func:`nilaffine.linalg.engel_flag`)
instead of per-element checks, which is sound for the span because a
strict flag triangularizes every combination at once.

Indices in reports and error messages are 1-based (X_1, D_1, ...);
the Python API is 0-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import (DerivationError, FieldMismatchError, ParseError,
                     PreconditionError, ShapeError)
from .liealg import (LieAlgebra, algebra_from_dict, algebra_to_dict, catalog,
                     is_derivation, leibniz_residual, resolve_name,
                     semidirect_bracket)
from .linalg import (EngelFailure, Flag, Matrix, Vector, as_vector, engel_flag,
                     matrix_from_json, matrix_to_json, vec_is_zero,
                     vector_from_json, vector_to_json)
from .scalars import Scalar


class AffineRep:
    """Basis-indexed data of a map X_i -> (t_i, D_i).

    Shapes and the field context are validated at construction; the
    derivation property of the D_i and the homomorphism identity are not,
    so partially built or deliberately broken reps can be represented and
    then diagnosed. Use :func:`validate_derivations`,
    :func:`check_homomorphism` and :func:`check_simply_transitive`.
    """

    __slots__ = ("source", "target", "t", "D", "label")

    def __init__(self, source: LieAlgebra, target: LieAlgebra,
                 t: Sequence[Sequence], D: Sequence[Matrix],
                 label: str | None = None):
        if source.d != target.d:
            raise FieldMismatchError(
                f"source context d={source.d} differs from target d={target.d}")
        m, n = source.dim, target.dim
        if len(t) != m:
            raise ShapeError(f"expected {m} translation vectors, got {len(t)}")
        if len(D) != m:
            raise ShapeError(f"expected {m} linear parts, got {len(D)}")
        tv = []
        for i, row in enumerate(t):
            vec = as_vector(row, target.d)
            if len(vec) != n:
                raise ShapeError(f"translation vector {i + 1} has length "
                                 f"{len(vec)}, expected {n}")
            tv.append(vec)
        dm = []
        for i, mat in enumerate(D):
            if not isinstance(mat, Matrix):
                raise TypeError(f"linear part {i + 1} must be a Matrix")
            if mat.rows != n or mat.cols != n:
                raise ShapeError(f"linear part {i + 1} is {mat.rows}x{mat.cols}, "
                                 f"expected {n}x{n}")
            if mat.d != target.d:
                mat = Matrix(n, n, mat.entries(), target.d)
            dm.append(mat)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "t", tuple(tv))
        object.__setattr__(self, "D", tuple(dm))
        object.__setattr__(self, "label", label or f"{source.name}->{target.name}")

    def __setattr__(self, name, value):
        raise AttributeError("AffineRep is immutable")

    @property
    def d(self) -> int:
        return self.target.d

    def t_matrix(self) -> Matrix:
        """The target.dim x source.dim matrix whose columns are the t_i."""
        return Matrix.from_columns(self.t, self.d) if self.t else \
            Matrix.zero(self.target.dim, 0, self.d)

    def t_of(self, x: Vector) -> Vector:
        """Translation part of an arbitrary source vector, by linearity."""
        if len(x) != self.source.dim:
            raise ShapeError(f"expected a source vector of length {self.source.dim}")
        return self.t_matrix().apply(x)

    def D_of(self, x: Vector) -> Matrix:
        """Linear part of an arbitrary source vector, by linearity."""
        if len(x) != self.source.dim:
            raise ShapeError(f"expected a source vector of length {self.source.dim}")
        acc = Matrix.zero(self.target.dim, self.target.dim, self.d)
        for c, mat in zip(x, self.D):
            if not c.is_zero():
                acc = acc + c * mat
        return acc

    def __eq__(self, other):
        if not isinstance(other, AffineRep):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.t == other.t and self.D == other.D)

    def __hash__(self):
        return hash((self.source, self.target, self.t, self.D))

    def __repr__(self):
        return (f"AffineRep({self.label!r}, {self.source.dim}->"
                f"{self.target.dim}, d={self.d})")


def validate_derivations(rep: AffineRep) -> None:
    """Raise DerivationError naming the first D_i violating Leibniz.

    The error carries 1-based labels: index is the offending i of D_i,
    pair the basis pair (a, b) of the target where the residual is nonzero.
    """
    n = rep.target.dim
    for i, mat in enumerate(rep.D):
        for a in range(n):
            for b in range(a + 1, n):
                if not vec_is_zero(leibniz_residual(rep.target, mat, a, b)):
                    raise DerivationError(
                        f"D_{i + 1} violates the Leibniz rule on the target "
                        f"pair (X_{a + 1}, X_{b + 1})",
                        index=i + 1, pair=(a + 1, b + 1))


# ------------------------------------------------------------------ verdicts


class HomViolation(NamedTuple):
    pair: tuple[int, int]          # 1-based source basis pair
    vector_residual: Vector
    matrix_residual: Matrix


@dataclass(frozen=True)
class HomReport:
    ok: bool
    violations: tuple[HomViolation, ...]

    def __bool__(self) -> bool:
        return self.ok


def check_homomorphism(rep: AffineRep) -> HomReport:
    """Whether X_i -> (t_i, D_i) respects brackets into the semidirect sum.

    Preconditions (raised, not reported): the source satisfies Jacobi and
    every D_i is a derivation of the target. With those in place the map
    lands in an actual Lie algebra and the check is the identity
    rep([X_i, X_j]) = [(t_i, D_i), (t_j, D_j)] for all i < j, the right
    side being the semidirect bracket.
    """
    jac = rep.source.check_jacobi()
    if not jac.ok:
        first = jac.violations[0].triple
        raise PreconditionError(
            f"source algebra {rep.source.name!r} fails the Jacobi identity "
            f"at triple {first}")
    validate_derivations(rep)
    violations = []
    m = rep.source.dim
    for i in range(m):
        for j in range(i + 1, m):
            lhs_vec = rep.t_of(rep.source.bracket_basis(i, j))
            lhs_mat = rep.D_of(rep.source.bracket_basis(i, j))
            rhs_vec, rhs_mat = semidirect_bracket(
                rep.target, (rep.t[i], rep.D[i]), (rep.t[j], rep.D[j]))
            dv = tuple(a - b for a, b in zip(lhs_vec, rhs_vec))
            dm = lhs_mat - rhs_mat
            if not (vec_is_zero(dv) and dm.is_zero()):
                violations.append(HomViolation((i + 1, j + 1), dv, dm))
    return HomReport(not violations, tuple(violations))


@dataclass(frozen=True)
class BijectivityReport:
    ok: bool
    rank: int
    source_dim: int
    target_dim: int
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


class NonNilpotentWitness(NamedTuple):
    coefficients: tuple[Scalar, ...]   # combination over the source basis
    matrix: Matrix


@dataclass(frozen=True)
class NilpotencyReport:
    ok: bool
    flag: Flag | None = None
    failure: EngelFailure | None = None
    witness: NonNilpotentWitness | None = None

    def __bool__(self) -> bool:
        return self.ok


_WITNESS_SAMPLES = 100


def _search_non_nilpotent(rep: AffineRep) -> NonNilpotentWitness | None:
    """Concrete non-nilpotent combination of the D_i, if sampling finds one.

    Tried in order: each basis matrix alone, then seeded random rational
    combinations. A stalled flag already proves non-nilpotency of the span;
    this only makes the evidence tangible for reports, so coming up empty
    is acceptable.
    """
    m = rep.source.dim
    zero, one = Scalar.zero(rep.d), Scalar.one(rep.d)
    for i, mat in enumerate(rep.D):
        if not mat.is_nilpotent():
            coeffs = tuple(one if k == i else zero for k in range(m))
            return NonNilpotentWitness(coeffs, mat)
    rng = random.Random(0)
    for _ in range(_WITNESS_SAMPLES):
        coeffs = tuple(Scalar.of(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                                 rep.d)
                       for _ in range(m))
        mat = rep.D_of(coeffs)
        if not mat.is_nilpotent():
            return NonNilpotentWitness(coeffs, mat)
    return None


@dataclass(frozen=True)
class RepVerdict:
    homomorphism: HomReport
    t_bijective: BijectivityReport
    linear_parts_nilpotent: NilpotencyReport
    overall: bool

    def __bool__(self) -> bool:
        return self.overall


def check_simply_transitive(rep: AffineRep) -> RepVerdict:
    """Full verdict: homomorphism, bijective translations, nilpotent span.

    The translation criterion asks the matrix with columns t_i to be a
    linear bijection, which already fails structurally when source and
    target dimensions differ (reported distinctly). The nilpotency
    criterion runs the common-flag construction on {D_1, ..., D_m}; on
    success the flag is kept in the verdict as the certificate, on failure
    the stalled subspace and (when sampling finds one) a concrete
    non-nilpotent combination are reported.
    """
    hom = check_homomorphism(rep)

    m, n = rep.source.dim, rep.target.dim
    if m != n:
        bij = BijectivityReport(False, rank=min(rep.t_matrix().rank(), n),
                                source_dim=m, target_dim=n,
                                reason=f"source dimension {m} differs from "
                                       f"target dimension {n}")
    else:
        rank = rep.t_matrix().rank()
        bij = BijectivityReport(rank == n, rank=rank, source_dim=m, target_dim=n,
                                reason=None if rank == n else
                                f"translation matrix has rank {rank} < {n}")

    flag = engel_flag(rep.D, size=n, d=rep.d)
    if flag:
        nil = NilpotencyReport(True, flag=flag)
    else:
        nil = NilpotencyReport(False, failure=flag,
                               witness=_search_non_nilpotent(rep))

    return RepVerdict(hom, bij, nil, bool(hom) and bool(bij) and bool(nil))


# ------------------------------------------------------------------ files


def _algebra_ref_to_json(L: LieAlgebra) -> object:
    """Catalog name when the algebra is (a re-contexted) catalog entry."""
    try:
        key = resolve_name(L.name)
    except ParseError:
        return algebra_to_dict(L)
    entry = catalog()[key]
    if L == entry.with_field(L.d):
        return key
    return algebra_to_dict(L)


def _algebra_ref_from_json(data: object, d: int | None, where: str) -> LieAlgebra:
    if isinstance(data, str):
        try:
            key = resolve_name(data)
        except ParseError as exc:
            raise ParseError(f"{where}: {exc}") from exc
        L = catalog()[key]
        return L.with_field(d) if d is not None else L
    L = algebra_from_dict(data, where)
    if d is not None and L.d != d:
        if L.d != 1:
            raise ParseError(f"{where}: algebra declares d={L.d} but the "
                             f"representation uses d={d}")
        L = L.with_field(d)
    return L


def rep_to_dict(rep: AffineRep) -> dict:
    doc = {
        "source": _algebra_ref_to_json(rep.source),
        "target": _algebra_ref_to_json(rep.target),
        "t": [vector_to_json(v) for v in rep.t],
        "D": [matrix_to_json(m) for m in rep.D],
    }
    if rep.d != 1:
        doc["d"] = rep.d
    return doc


def _resolve_context(data: dict, where: str) -> int | None:
    """Field context for a rep/LR document.

    Explicit top-level "d" wins; otherwise inline algebras that agree on a
    non-default d set it; otherwise None (meaning: take the algebras as
    they come, default 1).
    """
    if "d" in data:
        d = data["d"]
        if isinstance(d, bool) or not isinstance(d, int):
            raise ParseError(f"{where}.d: expected an integer")
        return d
    ds = set()
    for key in ("source", "target", "algebra"):
        sub = data.get(key)
        if isinstance(sub, dict) and "d" in sub:
            val = sub["d"]
            if isinstance(val, bool) or not isinstance(val, int):
                raise ParseError(f"{where}.{key}.d: expected an integer")
            ds.add(val)
    if len(ds) > 1:
        raise ParseError(f"{where}: inline algebras disagree on d: {sorted(ds)}")
    return ds.pop() if ds else None


def rep_from_dict(data: object, where: str = "rep",
                  label: str | None = None) -> AffineRep:
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = set(data) - {"source", "target", "t", "D", "d"}
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
    for key in ("source", "target", "t", "D"):
        if key not in data:
            raise ParseError(f"{where}: missing required key {key!r}")
    d = _resolve_context(data, where)
    source = _algebra_ref_from_json(data["source"], d, f"{where}.source")
    target = _algebra_ref_from_json(data["target"], d, f"{where}.target")
    if source.d != target.d:
        # one was inline with explicit d, the other a d=1 catalog name
        lifted = max(source.d, target.d)
        source, target = source.with_field(lifted), target.with_field(lifted)
    m, n = source.dim, target.dim
    raw_t, raw_D = data["t"], data["D"]
    if not isinstance(raw_t, list) or len(raw_t) != m:
        raise ParseError(f"{where}.t: expected {m} vectors")
    if not isinstance(raw_D, list) or len(raw_D) != m:
        raise ParseError(f"{where}.D: expected {m} matrices")
    t = [vector_from_json(v, n, target.d, f"{where}.t[{i}]")
         for i, v in enumerate(raw_t)]
    D = [matrix_from_json(mat, n, n, target.d, f"{where}.D[{i}]")
         for i, mat in enumerate(raw_D)]
    try:
        return AffineRep(source, target, t, D, label=label)
    except (ShapeError, FieldMismatchError) as exc:
        raise ParseError(f"{where}: {exc}") from exc


def rep_of_files(source_path: str, target_path: str, rep_path: str) -> AffineRep:
    """Load and validate a representation from three files.

    The source and target files pin the algebras; if the rep file also
    names or inlines them, they must agree structurally. The derivation
    precondition is checked here, so the result is ready for
    check_homomorphism without surprises.
    """
    from .io import read_json

    source = algebra_from_dict(read_json(source_path), f"{source_path}: algebra")
    target = algebra_from_dict(read_json(target_path), f"{target_path}: algebra")
    data = read_json(rep_path)
    if not isinstance(data, dict):
        raise ParseError(f"{rep_path}: rep: expected an object")
    data = dict(data)
    declared = _resolve_context(data, f"{rep_path}: rep")
    if declared is None and (source.d != 1 or target.d != 1):
        declared = max(source.d, target.d)
        data["d"] = declared
    data.setdefault("source", algebra_to_dict(source))
    data.setdefault("target", algebra_to_dict(target))
    rep = rep_from_dict(data, f"{rep_path}: rep")
    if rep.source != source.with_field(rep.d):
        raise ParseError(f"{rep_path}: rep.source disagrees with {source_path}")
    if rep.target != target.with_field(rep.d):
        raise ParseError(f"{rep_path}: rep.target disagrees with {target_path}")
    validate_derivations(rep)
    return rep


def trivial_rep(L: LieAlgebra) -> AffineRep:
    """X -> (X, 0): a homomorphism for any L, simply transitive for nilpotent L."""
    n = L.dim
    zero = Matrix.zero(n, n, L.d)
    return AffineRep(L, L, [L.basis_vector(i) for i in range(n)],
                     [zero] * n, label=f"trivial on {L.name}")
