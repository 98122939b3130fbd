"""Bilinear products with commuting left and right multiplications.

An :class:`LRStructure` equips a Lie algebra with a product X.Y subject to
three identities, checked exactly on basis elements (multilinearity does
the rest):

  (1) X.(Y.Z) = Y.(X.Z)        left multiplications commute
  (2) (X.Y).Z = (X.Z).Y        right multiplications commute
  (3) [X, Y] = X.Y - Y.X       the commutator recovers the bracket

The structure is complete when every left multiplication L(X) is
nilpotent. Because identity (1) makes the L-operators commute, this is
equivalent to the existence of a common strict flag for the basis family
{L(X_i)}, which is what :func:`check_complete` computes, keeping the flag
as a certificate.

Complete structures and simply transitive representations with abelian
source translate into one another: rep_to_lr reads the product off the
negated linear parts (normalizing translations to the identity first),
lr_to_rep rebuilds the representation. Both directions re-verify what
theory promises and treat a violation as an internal error rather than
silently returning a bad object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .affine import AffineRep, check_simply_transitive
from .errors import (IncompleteStructureError, InternalError, ParseError,
                     PreconditionError, ShapeError)
from .liealg import LieAlgebra, abelian, is_derivation
from .linalg import (EngelFailure, Flag, Matrix, Vector, as_vector, engel_flag,
                     vec_is_zero, vec_sub)
from .scalars import Scalar, scalar_from_json, scalar_to_json


class LRViolation(NamedTuple):
    identity: int                 # 1, 2 or 3
    where: tuple[int, ...]        # 1-based basis triple (identities 1, 2) or pair (3)
    residual: Vector


@dataclass(frozen=True)
class LRReport:
    ok: bool
    violations: tuple[LRViolation, ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class CompletenessVerdict:
    complete: bool
    flag: Flag | None = None
    failure: EngelFailure | None = None

    def __bool__(self) -> bool:
        return self.complete


class LRStructure:
    """Product constants over ordered basis pairs of a Lie algebra.

    products[i][j] is the coordinate vector of X_i . X_j; the grid is
    dense since the product carries no symmetry. Identities are not
    enforced at construction, use :func:`check_lr`.
    """

    __slots__ = ("algebra", "products")

    def __init__(self, algebra: LieAlgebra,
                 products: Sequence[Sequence[Sequence]]):
        n = algebra.dim
        if len(products) != n:
            raise ShapeError(f"expected {n} product rows, got {len(products)}")
        grid = []
        for i, row in enumerate(products):
            if len(row) != n:
                raise ShapeError(f"product row {i + 1} has {len(row)} entries, "
                                 f"expected {n}")
            vecs = []
            for j, entry in enumerate(row):
                v = as_vector(entry, algebra.d)
                if len(v) != n:
                    raise ShapeError(f"product ({i + 1}, {j + 1}) has length "
                                     f"{len(v)}, expected {n}")
                vecs.append(v)
            grid.append(tuple(vecs))
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "products", tuple(grid))

    def __setattr__(self, name, value):
        raise AttributeError("LRStructure is immutable")

    @classmethod
    def from_table(cls, algebra: LieAlgebra,
                   table: Mapping[tuple[int, int], Iterable[tuple[int, object]]]
                   ) -> "LRStructure":
        """Build from a sparse 1-based table (i, j) -> [(k, c), ...]."""
        n = algebra.dim
        zero = algebra.zero_vector()
        grid = [[list(zero) for _ in range(n)] for _ in range(n)]
        for (i, j), terms in table.items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise ShapeError(f"product pair ({i}, {j}) out of range 1..{n}")
            for k, c in terms:
                if not 1 <= k <= n:
                    raise ShapeError(f"product target {k} out of range 1..{n}")
                coeff = c if isinstance(c, Scalar) else Scalar.of(c, algebra.d)
                grid[i - 1][j - 1][k - 1] = grid[i - 1][j - 1][k - 1] + coeff
        return cls(algebra, grid)

    @property
    def d(self) -> int:
        return self.algebra.d

    def product_basis(self, i: int, j: int) -> Vector:
        return self.products[i][j]

    def product(self, x: Vector, y: Vector) -> Vector:
        n = self.algebra.dim
        if len(x) != n or len(y) != n:
            raise ShapeError(f"product arguments must have length {n}")
        out = list(self.algebra.zero_vector())
        for i in range(n):
            if x[i].is_zero():
                continue
            for j in range(n):
                coeff = x[i] * y[j]
                if coeff.is_zero():
                    continue
                for k, c in enumerate(self.products[i][j]):
                    if not c.is_zero():
                        out[k] = out[k] + coeff * c
        return tuple(out)

    def left_matrix(self, i: int) -> Matrix:
        """L(X_i): columns are X_i . X_j."""
        return Matrix.from_columns(self.products[i], self.d)

    def right_matrix(self, i: int) -> Matrix:
        """R(X_i): columns are X_j . X_i."""
        return Matrix.from_columns(
            tuple(self.products[j][i] for j in range(self.algebra.dim)), self.d)

    def __eq__(self, other):
        if not isinstance(other, LRStructure):
            return NotImplemented
        return self.algebra == other.algebra and self.products == other.products

    def __hash__(self):
        return hash((self.algebra, self.products))

    def __repr__(self):
        return f"LRStructure(on {self.algebra.name!r}, dim={self.algebra.dim})"


# ------------------------------------------------------------------ checks


def check_lr(s: LRStructure) -> LRReport:
    """Decide identities (1), (2), (3) on all basis triples and pairs."""
    jac = s.algebra.check_jacobi()
    if not jac.ok:
        raise PreconditionError(
            f"algebra {s.algebra.name!r} fails the Jacobi identity at "
            f"triple {jac.violations[0].triple}")
    n = s.algebra.dim
    basis = [s.algebra.basis_vector(i) for i in range(n)]
    violations = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                r1 = vec_sub(s.product(basis[i], s.products[j][k]),
                             s.product(basis[j], s.products[i][k]))
                if not vec_is_zero(r1):
                    violations.append(LRViolation(1, (i + 1, j + 1, k + 1), r1))
                r2 = vec_sub(s.product(s.products[i][j], basis[k]),
                             s.product(s.products[i][k], basis[j]))
                if not vec_is_zero(r2):
                    violations.append(LRViolation(2, (i + 1, j + 1, k + 1), r2))
    for i in range(n):
        for j in range(i + 1, n):
            r3 = vec_sub(s.algebra.bracket_basis(i, j),
                         vec_sub(s.products[i][j], s.products[j][i]))
            if not vec_is_zero(r3):
                violations.append(LRViolation(3, (i + 1, j + 1), r3))
    violations.sort(key=lambda v: (v.identity, v.where))
    return LRReport(not violations, tuple(violations))


def check_complete(s: LRStructure) -> CompletenessVerdict:
    """Whether all left multiplications are nilpotent, via a common flag.

    Requires commuting left multiplications (identity (1)); without it a
    flag's absence would not certify a non-nilpotent L(X). That slice of
    check_lr is re-verified here since completeness is meaningless when it
    fails.
    """
    n = s.algebra.dim
    lefts = [s.left_matrix(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if not lefts[i].commutator(lefts[j]).is_zero():
                raise PreconditionError(
                    f"left multiplications L(X_{i + 1}) and L(X_{j + 1}) do "
                    f"not commute; identity (1) fails")
    flag = engel_flag(lefts, size=n, d=s.d)
    if flag:
        return CompletenessVerdict(True, flag=flag)
    return CompletenessVerdict(False, failure=flag)


# ------------------------------------------------------------------ the two directions


def rep_to_lr(rep: AffineRep) -> LRStructure:
    """Product X.Y = -D_X(Y) of a passing representation with abelian source.

    When the translation matrix is not the identity the source basis is
    re-parametrized through its inverse first (an automorphism, since the
    source is abelian), so the product is always read in target
    coordinates. The result is re-verified; a failure there cannot come
    from user input and raises InternalError.
    """
    if not rep.source.is_abelian():
        raise PreconditionError(
            f"source algebra {rep.source.name!r} is not abelian")
    if rep.source.dim != rep.target.dim:
        raise PreconditionError(
            f"source dimension {rep.source.dim} differs from target "
            f"dimension {rep.target.dim}")
    verdict = check_simply_transitive(rep)
    if not verdict.overall:
        parts = []
        if not verdict.homomorphism:
            parts.append("homomorphism")
        if not verdict.t_bijective:
            parts.append("translation bijectivity")
        if not verdict.linear_parts_nilpotent:
            parts.append("nilpotency of linear parts")
        raise PreconditionError(
            "representation is not simply transitive; failing: "
            + ", ".join(parts))

    n = rep.target.dim
    tmat = rep.t_matrix()
    if tmat == Matrix.identity(n, rep.d):
        parts_D = rep.D
    else:
        tinv = tmat.inverse()
        parts_D = tuple(rep.D_of(tinv.column(i)) for i in range(n))

    products = [[tuple(-c for c in parts_D[i].column(j)) for j in range(n)]
                for i in range(n)]
    s = LRStructure(rep.target, products)

    report = check_lr(s)
    if not report.ok:
        raise InternalError(
            f"derived product violates LR identity {report.violations[0].identity} "
            f"at {report.violations[0].where}; a passing representation always "
            f"converts cleanly, so this is a bug")
    if not check_complete(s).complete:
        raise InternalError(
            "derived product is not complete although the representation "
            "passed; a passing representation always converts cleanly, so "
            "this is a bug")
    return s


def lr_to_rep(s: LRStructure) -> AffineRep:
    """Representation with abelian source, identity translations, D_i = -L(X_i).

    Refuses structures that fail the identities (PreconditionError, with
    the violation list) or completeness (IncompleteStructureError, with
    the stalled-subspace evidence). The derivation property of the -L(X_i)
    and the full simple-transitivity verdict are consequences of the LR
    axioms; they are re-checked and a failure raises InternalError.
    """
    report = check_lr(s)
    if not report.ok:
        first = report.violations[0]
        raise PreconditionError(
            f"product violates LR identity {first.identity} at {first.where}")
    verdict = check_complete(s)
    if not verdict.complete:
        raise IncompleteStructureError(
            "structure is not complete: left multiplications have no common "
            "strict flag", evidence=verdict.failure)

    n = s.algebra.dim
    source = abelian(n, s.d)
    t = [source.basis_vector(i) for i in range(n)]
    D = [-s.left_matrix(i) for i in range(n)]
    for i, mat in enumerate(D):
        if not is_derivation(s.algebra, mat):
            raise InternalError(
                f"-L(X_{i + 1}) is not a derivation although the LR identities "
                f"hold; the identities force that property, so this is a bug")
    rep = AffineRep(source, s.algebra, t, D,
                    label=f"abelian rep on {s.algebra.name}")
    if not check_simply_transitive(rep).overall:
        raise InternalError(
            "rebuilt representation fails the simple-transitivity verdict "
            "although the structure is complete; completeness forces that "
            "verdict, so this is a bug")
    return rep


# ------------------------------------------------------------------ files


def lr_to_dict(s: LRStructure) -> dict:
    from .affine import _algebra_ref_to_json

    product = []
    n = s.algebra.dim
    for i in range(n):
        for j in range(n):
            terms = [{"k": k + 1, "c": scalar_to_json(c)}
                     for k, c in enumerate(s.products[i][j]) if not c.is_zero()]
            if terms:
                product.append({"i": i + 1, "j": j + 1, "terms": terms})
    doc = {"algebra": _algebra_ref_to_json(s.algebra), "product": product}
    if s.d != 1:
        doc["d"] = s.d
    return doc


def lr_from_dict(data: object, where: str = "lr") -> LRStructure:
    from .affine import _algebra_ref_from_json, _resolve_context

    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = set(data) - {"algebra", "product", "d"}
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
    if "algebra" not in data:
        raise ParseError(f"{where}: missing required key 'algebra'")
    d = _resolve_context(data, where)
    algebra = _algebra_ref_from_json(data["algebra"], d, f"{where}.algebra")
    n = algebra.dim
    raw = data.get("product", [])
    if not isinstance(raw, list):
        raise ParseError(f"{where}.product: expected a list")
    zero = algebra.zero_vector()
    grid = [[list(zero) for _ in range(n)] for _ in range(n)]
    seen: set[tuple[int, int]] = set()
    for pi, entry in enumerate(raw):
        loc = f"{where}.product[{pi}]"
        if not isinstance(entry, dict) or set(entry) != {"i", "j", "terms"}:
            raise ParseError(f"{loc}: expected an object with keys i, j, terms")
        i, j = entry["i"], entry["j"]
        for label, val in (("i", i), ("j", j)):
            if isinstance(val, bool) or not isinstance(val, int):
                raise ParseError(f"{loc}.{label}: expected an integer")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"{loc}: pair ({i}, {j}) out of range 1..{n}")
        if (i, j) in seen:
            raise ParseError(f"{loc}: duplicate pair ({i}, {j})")
        seen.add((i, j))
        if not isinstance(entry["terms"], list):
            raise ParseError(f"{loc}.terms: expected a list")
        for ti, term in enumerate(entry["terms"]):
            tloc = f"{loc}.terms[{ti}]"
            if not isinstance(term, dict) or set(term) != {"k", "c"}:
                raise ParseError(f"{tloc}: expected an object with keys k and c")
            k = term["k"]
            if isinstance(k, bool) or not isinstance(k, int):
                raise ParseError(f"{tloc}.k: expected an integer")
            if not 1 <= k <= n:
                raise ParseError(f"{tloc}.k: {k} out of range 1..{n}")
            grid[i - 1][j - 1][k - 1] = grid[i - 1][j - 1][k - 1] + \
                scalar_from_json(term["c"], algebra.d, f"{tloc}.c")
    return LRStructure(algebra, grid)
