"""Lie algebras given by structure constants, and the constructions on
them used throughout the package: Jacobi validation, Killing form,
basis change, the coframe differential, Lie derivatives of invariant
tensors, fibration checks and distribution growth.

Conventions.  Structure constants are stored sparsely for ordered pairs
J < K as [e_J, e_K] = sum_I c^I_JK e_I.  The differential acts on the
dual coframe by d e^I = -(1/2) c^I_JK e^J ^ e^K and extends as an
antiderivation; Lie derivatives along basis vectors use the Cartan
formula on forms and the coframe weight rule L_a e^I = -c^I_aK e^K,
extended as a derivation, on symmetric 2-tensors.  All computations are
algebraic identities in the structure constants: they hold at the
identity of any group carrying the coframe, and by invariance
everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import kernels, scalars, _linalg
from .errors import (
    DimensionMismatch,
    InternalInconsistency,
    NotAFibration,
    NotInvariant,
    SingularMatrix,
    ValidationError,
)
from .exterior import Form, SymTensor2, Vector, interior

_F0 = Fraction(0)
_F1 = Fraction(1)


class LieAlgebra:
    """Finite-dimensional Lie algebra over exact scalars.

    `brackets` maps ordered index pairs (J, K), J < K, to sparse maps
    I -> c^I_JK.  Instances are immutable after construction; the
    coframe differentials are cached lazily.
    """

    __slots__ = ("dim", "brackets", "_dcoframe")

    def __init__(self, dim: int, brackets: Mapping):
        if dim < 1:
            raise ValueError("dimension must be positive")
        clean = {}
        for (j, k), comps in brackets.items():
            j, k = int(j), int(k)
            if not (1 <= j < k <= dim):
                raise ValueError(f"bad bracket pair ({j},{k}) for dim {dim}")
            inner = {}
            for i, c in comps.items():
                i = int(i)
                if not 1 <= i <= dim:
                    raise ValueError(f"bad bracket target {i}")
                c = scalars.as_scalar(c)
                if not scalars.is_zero(c):
                    inner[i] = c
            if inner:
                clean[(j, k)] = inner
        self.dim = dim
        self.brackets = clean
        self._dcoframe = None

    # -- brackets -------------------------------------------------------

    def bracket_basis(self, j: int, k: int) -> dict:
        """[e_j, e_k] as a sparse component map (any index order)."""
        if j == k:
            return {}
        if j < k:
            return dict(self.brackets.get((j, k), {}))
        comps = self.brackets.get((k, j), {})
        return {i: -c for i, c in comps.items()}

    def bracket(self, x: Vector, y: Vector) -> Vector:
        """Bracket of two frame vectors, extended bilinearly."""
        if x.dim != self.dim or y.dim != self.dim:
            raise DimensionMismatch("vector dimension does not match algebra")
        acc = [_F0] * self.dim
        for (j, k), comps in self.brackets.items():
            w = x[j] * y[k] - x[k] * y[j]
            if scalars.is_zero(scalars.as_scalar(w)):
                continue
            for i, c in comps.items():
                acc[i - 1] = acc[i - 1] + w * c
        return Vector(acc)

    # -- validation -----------------------------------------------------

    def jacobi_check(self) -> "JacobiReport":
        """Exact Jacobi test over all index triples.

        Returns a report carrying the maximum-violation triple (largest
        defect, ties broken lexicographically) when the identity fails.
        """
        worst = None
        n = self.dim
        for j in range(1, n + 1):
            for k in range(j + 1, n + 1):
                for l in range(k + 1, n + 1):
                    defect: dict = {}
                    for x, y, z in ((j, k, l), (k, l, j), (l, j, k)):
                        for m, c in self.bracket_basis(x, y).items():
                            for i, c2 in self.bracket_basis(m, z).items():
                                v = defect.get(i, _F0) + c * c2
                                if scalars.is_zero(scalars.as_scalar(v)):
                                    defect.pop(i, None)
                                else:
                                    defect[i] = v
                    if defect:
                        size = _defect_size(defect)
                        if worst is None or size > worst[0]:
                            worst = (size, (j, k, l), defect)
        if worst is None:
            return JacobiReport(True, None, None)
        return JacobiReport(False, worst[1], worst[2])

    # -- invariants of the algebra ---------------------------------------

    def killing(self) -> SymTensor2:
        """Killing tensor K_JL = (1/12) sum_{I,K} c^I_JK c^K_LI."""
        n = self.dim
        ad = []
        for a in range(1, n + 1):
            m: dict = {}
            for k in range(1, n + 1):
                for i, c in self.bracket_basis(a, k).items():
                    m[(i, k)] = c
            ad.append(m)
        twelfth = Fraction(1, 12)
        entries = {}
        for j in range(1, n + 1):
            aj = ad[j - 1]
            for l in range(j, n + 1):
                al = ad[l - 1]
                total = _F0
                for (i, m), c in aj.items():
                    c2 = al.get((m, i))
                    if c2 is not None:
                        total = total + c * c2
                total = total * twelfth
                if not scalars.is_zero(scalars.as_scalar(total)):
                    entries[(j, l)] = total
        return SymTensor2(n, entries)

    # -- coframe differential ---------------------------------------------

    def coframe_differential(self, index: int) -> Form:
        """d e^index as a 2-form."""
        if self._dcoframe is None:
            d = [dict() for _ in range(self.dim + 1)]
            for (j, k), comps in self.brackets.items():
                for i, c in comps.items():
                    d[i][(j, k)] = -c
            self._dcoframe = [None] + [
                Form(self.dim, 2, d[i]) for i in range(1, self.dim + 1)
            ]
        return self._dcoframe[index]

    def mc_differential(self, form: Form) -> Form:
        """Exterior differential of an invariant form."""
        if form.dim != self.dim:
            raise DimensionMismatch("form dimension does not match algebra")
        buckets: dict = {}
        for key, coeff in form.terms.items():
            for t, idx in enumerate(key):
                dterm = self.coframe_differential(idx)
                if not dterm:
                    continue
                rest = key[:t] + key[t + 1 :]
                for pair, u in dterm.terms.items():
                    merged = kernels.merge_indices(pair, rest)
                    if merged is None:
                        continue
                    mkey, sign = merged
                    if t % 2:
                        sign = -sign
                    v = coeff * u
                    if sign < 0:
                        v = -v
                    buckets.setdefault(mkey, []).append(v)
        out = {}
        for mkey, bucket in buckets.items():
            total = bucket[0] if len(bucket) == 1 else scalars.scalar_sum(bucket)
            if not scalars.is_zero(total):
                out[mkey] = total
        f = Form.__new__(Form)
        f.dim, f.degree, f.terms = form.dim, form.degree + 1, out
        return f

    # -- Lie derivatives ---------------------------------------------------

    def lie_derivative_form(self, a: int, form: Form) -> Form:
        """L_{e_a} via the Cartan formula i_a d + d i_a."""
        e_a = Vector.basis(self.dim, a)
        return interior(e_a, self.mc_differential(form)) + self.mc_differential(
            interior(e_a, form)
        )

    def lie_derivative_sym2(self, a: int, tensor: SymTensor2) -> SymTensor2:
        """L_{e_a} on a symmetric 2-tensor in coframe components."""
        if tensor.dim != self.dim:
            raise DimensionMismatch("tensor dimension does not match algebra")
        return SymTensor2(self.dim, _sym_accumulate(self, a, tensor))

    # -- fibration structure -------------------------------------------------

    def horizontal_integrability(self, k: int) -> bool:
        """True when d e^mu ^ e^1 ^ ... ^ e^k = 0 for every mu <= k."""
        if not 1 <= k <= self.dim:
            raise ValueError(f"bad horizontal count {k}")
        top = Form.monomial(self.dim, tuple(range(1, k + 1)))
        for mu in range(1, k + 1):
            if not self.coframe_differential(mu).wedge(top).is_zero():
                return False
        return True

    def leaf_restriction(self, k: int) -> list:
        """Differentials of the vertical coframe with horizontal legs removed.

        Requires the horizontal integrability test to pass.
        """
        if not self.horizontal_integrability(k):
            raise NotAFibration(f"coframe fails integrability at k={k}")
        out = []
        for mu in range(k + 1, self.dim + 1):
            d = self.coframe_differential(mu)
            kept = {key: c for key, c in d.terms.items() if key[0] > k}
            out.append(Form(self.dim, 2, kept))
        return out

    def leaf_algebra(self, k: int) -> "LieAlgebra":
        """The vertical algebra read off the restricted differentials,
        re-indexed to 1..dim-k."""
        restricted = self.leaf_restriction(k)
        brackets: dict = {}
        for offset, d in enumerate(restricted):
            i_new = offset + 1
            for (j, l), c in d.terms.items():
                brackets.setdefault((j - k, l - k), {})[i_new] = -c
        leaf = LieAlgebra(self.dim - k, brackets)
        report = leaf.jacobi_check()
        if not report.ok:
            raise InternalInconsistency(
                f"leaf constants violate Jacobi at {report.triple}"
            )
        return leaf


def _sym_accumulate(algebra: LieAlgebra, a: int, tensor: SymTensor2) -> dict:
    """Components of -(A^T g + g A) with A^i_k = c^i_ak."""
    n = algebra.dim
    g = tensor.to_matrix()
    cols: list = [dict() for _ in range(n + 1)]
    for k in range(1, n + 1):
        for i, c in algebra.bracket_basis(a, k).items():
            cols[k][i] = c
    out = {}
    for kk in range(1, n + 1):
        for ll in range(kk, n + 1):
            total = _F0
            for i, c in cols[kk].items():
                v = g[i - 1][ll - 1]
                if not scalars.is_zero(scalars.as_scalar(v)):
                    total = total - c * v
            for i, c in cols[ll].items():
                v = g[kk - 1][i - 1]
                if not scalars.is_zero(scalars.as_scalar(v)):
                    total = total - v * c
            if not scalars.is_zero(scalars.as_scalar(total)):
                out[(kk, ll)] = total
    return out


def _defect_size(defect: dict):
    try:
        return sum(abs(Fraction(c)) for c in defect.values())
    except (TypeError, ValueError):
        return Fraction(sum(1 for _ in defect))


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: Optional[tuple]
    defect: Optional[dict]

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        body = ", ".join(
            f"e_{i}: {scalars.render_scalar(c)}" for i, c in sorted(self.defect.items())
        )
        return f"violation at {self.triple}: {body}"


class BasisChange:
    """Invertible change of basis; rows express new vectors in the old basis."""

    __slots__ = ("dim", "matrix", "_inverse")

    def __init__(self, matrix: Sequence[Sequence]):
        rows = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("basis change matrix must be square")
        self.dim = n
        self.matrix = rows
        try:
            self._inverse = _linalg.mat_inverse(rows)
        except SingularMatrix:
            raise SingularMatrix("basis change matrix is singular") from None

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "BasisChange":
        """new_i = old_{images[i-1]}"""
        n = len(images)
        rows = [[0] * n for _ in range(n)]
        for i, img in enumerate(images):
            rows[i][img - 1] = 1
        return cls(rows)

    def new_vector(self, i: int) -> Vector:
        return Vector(self.matrix[i - 1])

    def old_to_new(self, coords: Sequence) -> list:
        """Re-express an old-basis coordinate row in the new basis."""
        inv = self._inverse
        n = self.dim
        out = []
        for d in range(n):
            total = _F0
            for c in range(n):
                x = coords[c]
                if not scalars.is_zero(scalars.as_scalar(x)):
                    if inv[c][d]:
                        total = total + x * inv[c][d]
            out.append(total)
        return out


def change_basis(algebra: LieAlgebra, change: BasisChange) -> LieAlgebra:
    """Structure constants in the new basis."""
    if change.dim != algebra.dim:
        raise DimensionMismatch("basis change dimension does not match algebra")
    n = algebra.dim
    brackets = {}
    for a in range(1, n + 1):
        va = change.new_vector(a)
        for b in range(a + 1, n + 1):
            w = algebra.bracket(va, change.new_vector(b))
            coords = change.old_to_new(w.components)
            comps = {
                i + 1: c
                for i, c in enumerate(coords)
                if not scalars.is_zero(scalars.as_scalar(c))
            }
            if comps:
                brackets[(a, b)] = comps
    return LieAlgebra(n, brackets)


# -- matrix realizations -----------------------------------------------------


def _mat_comm(x, y):
    n = len(x)
    out = [[_F0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s = _F0
            for k in range(n):
                s += x[i][k] * y[k][j] - y[i][k] * x[k][j]
            out[i][j] = s
    return out


def algebra_from_matrices(matrices: Sequence) -> LieAlgebra:
    """Structure constants of a list of square matrices closed under
    commutators and linearly independent."""
    n = len(matrices)
    size = len(matrices[0])
    flat = [[m[i][j] for i in range(size) for j in range(size)] for m in matrices]
    brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            comm = _mat_comm(matrices[a], matrices[b])
            target = [comm[i][j] for i in range(size) for j in range(size)]
            coords = _linalg.solve_in_span(flat, target, size * size)
            if coords is None:
                raise ValidationError(
                    f"commutator of generators {a + 1},{b + 1} leaves the span"
                )
            comps = {i + 1: c for i, c in enumerate(coords) if c}
            if comps:
                brackets[(a + 1, b + 1)] = comps
    return LieAlgebra(n, brackets)


def _sp2_parameter_matrix(a: Sequence[Fraction]):
    """The defining 4x4 matrix, linear in ten parameters (1-based input)."""
    return (
        (a[5], a[7], a[9], 2 * a[10]),
        (-a[4], a[6], a[8], a[9]),
        (a[2], a[3], -a[6], -a[7]),
        (-2 * a[1], a[2], a[4], -a[5]),
    )


def sp2_matrices() -> tuple:
    """The ten 4x4 generator matrices E_I."""
    out = []
    for i in range(1, 11):
        unit = [_F0] * 11
        unit[i] = _F1
        out.append(_sp2_parameter_matrix(unit))
    return tuple(out)


def sp2_build() -> LieAlgebra:
    """The rank-two split symplectic algebra in its defining basis E_1..E_10.

    Structure constants are extracted from exact 4x4 commutators; the
    extraction is verified by re-assembling each commutator, so a wrong
    parameter matrix cannot slip through silently.
    """
    mats = sp2_matrices()
    algebra = algebra_from_matrices(mats)
    for (j, k), comps in algebra.brackets.items():
        lhs = _mat_comm(mats[j - 1], mats[k - 1])
        acc = [_F0] * 11
        for i, c in comps.items():
            acc[i] = c
        if _sp2_parameter_matrix(acc) != tuple(tuple(r) for r in lhs):
            raise InternalInconsistency(f"bracket ({j},{k}) readback failed")
    return algebra


# -- subspaces and distributions ----------------------------------------------


class Subspace:
    """Subspace of the frame space with a deterministic echelon basis."""

    __slots__ = ("dim", "basis")

    def __init__(self, dim: int, generators: Iterable[Vector]):
        rows = []
        for g in generators:
            if g.dim != dim:
                raise DimensionMismatch("generator dimension mismatch")
            row = {i: c for i, c in enumerate(g.components)
                   if not scalars.is_zero(c)}
            if row:
                rows.append(row)
        domain = _linalg.FractionDomain()
        work = _linalg.prepare_rows(rows, domain)
        pivots = _linalg.row_reduce(work, dim, domain)
        basis = []
        for col in sorted(pivots):
            row = work[pivots[col]]
            p = row[col]
            comps = [_F0] * dim
            for c, v in row.items():
                comps[c] = v / p
            basis.append(Vector(comps))
        self.dim = dim
        self.basis = tuple(basis)

    @classmethod
    def span(cls, dim: int, *vectors) -> "Subspace":
        return cls(dim, [v if isinstance(v, Vector) else Vector(v) for v in vectors])

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        if v.is_zero():
            return True
        coords = _linalg.solve_in_span(
            [list(b.components) for b in self.basis], list(v.components), self.dim
        )
        return coords is not None

    def sum(self, other: "Subspace") -> "Subspace":
        if other.dim != self.dim:
            raise DimensionMismatch("subspace dimension mismatch")
        return Subspace(self.dim, list(self.basis) + list(other.basis))

    def __str__(self) -> str:
        return "span(" + "; ".join(str(b) for b in self.basis) + ")"


def ad_invariance_check(
    algebra: LieAlgebra, dist: Subspace, stabilizer: Subspace
) -> bool:
    """True when [stabilizer, dist] lies inside dist + stabilizer."""
    total = dist.sum(stabilizer)
    for h in stabilizer.basis:
        for d in dist.basis:
            if not total.contains(algebra.bracket(h, d)):
                return False
    return True


def growth_vector(
    algebra: LieAlgebra, dist: Subspace, stabilizer: Subspace
) -> list:
    """Dimensions of the bracket-generated flag of `dist` modulo the
    stabilizer, ending at the first repetition."""
    if not ad_invariance_check(algebra, dist, stabilizer):
        raise NotInvariant("distribution is not stabilizer-invariant")
    h_rank = stabilizer.rank
    current = dist
    dims = [current.sum(stabilizer).rank - h_rank]
    while True:
        gens = list(current.basis)
        for d in dist.basis:
            for x in current.basis:
                w = algebra.bracket(d, x)
                if not w.is_zero():
                    gens.append(w)
        nxt = Subspace(algebra.dim, gens)
        rank = nxt.sum(stabilizer).rank - h_rank
        if rank == dims[-1]:
            return dims
        dims.append(rank)
        current = nxt
