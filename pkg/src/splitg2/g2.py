"""G2-structure machinery on a 7-dimensional coframe: metric bookkeeping,
pseudo-Riemannian Hodge star, the compatibility pairing between a metric
and a 3-form, irreducible-component membership tests, and the exact
solution of the first-order torsion equations

    d phi    = tau0 * (star phi) + 3 tau1 ^ phi + star tau3
    d star phi = 4 tau1 ^ (star phi) + tau2 ^ phi

subject to tau2 ^ star phi = 0 and tau3 ^ phi = 0, tau3 ^ star phi = 0.

Volume convention.  The volume form is vol = c * e^{1...7} with c a
positive rational.  sqrt|det g| is irrational for the metrics of
interest, so the metric volume is not representable in the exact field;
c is configurable instead, and `calibrate_vol_scale` pins down the value
a reference computation used.  Solved torsions transform along c by
exact scaling laws (tau0, tau3 scale with c; tau2 with 1/c; tau1 fixed),
so no information is lost by the choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Tuple

from . import _linalg, scalars
from .errors import (
    Degenerate,
    DegreeMismatch,
    DimensionMismatch,
    InternalInconsistency,
    ValidationError,
    WrongDimension,
    ZeroReference,
)
from .exterior import Form, SymTensor2, Vector, interior
from .invariants import LinearSystem, SolutionSpace, nullspace
from .liealg import LieAlgebra

_F0 = Fraction(0)
_F1 = Fraction(1)
_DIM = 7
_TOP = tuple(range(1, 8))


class Metric7:
    """Nondegenerate symmetric 2-tensor on the 7-dimensional frame with
    exact rational entries, plus its cached inverse and determinant."""

    __slots__ = ("tensor", "matrix", "det", "inverse", "_lowered")

    def __init__(self, tensor: SymTensor2):
        if tensor.dim != _DIM:
            raise DimensionMismatch(f"metric must live on dimension {_DIM}")
        for key, v in tensor.entries.items():
            if not isinstance(v, (int, Fraction)):
                raise ValidationError(f"metric entry {key} is not rational: {v!r}")
        self.tensor = tensor
        self.matrix = tensor.to_matrix()
        self.det = _linalg.mat_det(self.matrix)
        if self.det == 0:
            raise Degenerate("metric determinant is zero")
        self.inverse = _linalg.mat_inverse(self.matrix)
        self._lowered = None

    def lowered(self, i: int) -> Form:
        """The 1-form g(e_i, .) in coframe components."""
        if self._lowered is None:
            self._lowered = [None] + [
                Form(
                    _DIM,
                    1,
                    {
                        (j,): self.matrix[k - 1][j - 1]
                        for j in range(1, _DIM + 1)
                        if self.matrix[k - 1][j - 1]
                    },
                )
                for k in range(1, _DIM + 1)
            ]
        return self._lowered[i]

    def signature(self) -> Tuple[int, int]:
        """Inertia (plus, minus) via exact symmetric congruence reduction."""
        a = [row[:] for row in self.matrix]
        n = _DIM
        plus = minus = 0
        for i in range(n):
            if a[i][i] == 0:
                swap = next(
                    (j for j in range(i + 1, n) if a[j][j] != 0), None
                )
                if swap is not None:
                    _congruence_swap(a, i, swap)
                else:
                    j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                    if j is None:
                        raise Degenerate("zero row met during inertia reduction")
                    # a_ii = a_jj = 0, a_ij != 0: adding row+col j makes
                    # the corner 2*a_ij != 0 in characteristic zero
                    for k in range(n):
                        a[i][k] += a[j][k]
                    for k in range(n):
                        a[k][i] += a[k][j]
            pivot = a[i][i]
            if pivot > 0:
                plus += 1
            else:
                minus += 1
            for j in range(i + 1, n):
                f = a[i][j] / pivot
                if f:
                    for k in range(i, n):
                        a[j][k] -= f * a[i][k]
                    for k in range(i, n):
                        a[k][j] -= f * a[k][i]
        return plus, minus


def _congruence_swap(a, i, j):
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]


def compatibility_defect(metric: Metric7, phi: Form) -> SymTensor2:
    """B - 3g, where (e_u -| phi)^(e_v -| phi)^phi = B_uv e^{1...7}.

    Zero exactly when the pair satisfies the compatibility normalization
    with volume e^{1...7} and factor 3.
    """
    _expect(phi, 3)
    entries = {}
    hooked = [None] + [interior(Vector.basis(_DIM, m), phi) for m in range(1, 8)]
    for u in range(1, 8):
        left = hooked[u]
        for v in range(u, 8):
            w = left.wedge(hooked[v]).wedge(phi)
            b = w.coefficient(_TOP)
            if not scalars.is_zero(scalars.as_scalar(b)):
                entries[(u, v)] = b
    return SymTensor2(_DIM, entries) - metric.tensor * 3


@dataclass(frozen=True)
class G2Structure:
    """Compatible metric/3-form pair with a chosen volume scale."""

    metric: Metric7
    phi: Form
    vol_scale: Fraction = _F1

    def __post_init__(self):
        c = Fraction(self.vol_scale)
        if c <= 0:
            raise ValidationError("volume scale must be a positive rational")
        object.__setattr__(self, "vol_scale", c)
        defect = compatibility_defect(self.metric, self.phi)
        if not defect.is_zero():
            raise ValidationError(f"pair is not compatible: defect {defect}")

    def star(self, lam: Form) -> Form:
        return hodge_star(self.metric, lam, self.vol_scale)


def hodge_star(metric: Metric7, lam: Form, vol_scale=_F1) -> Form:
    """Hodge dual from the defining identity

        (star lam)(e_u1, ..., e_u(7-p)) vol = lam ^ g(e_u1) ^ ... ^ g(e_u(7-p))

    with vol = vol_scale * e^{1...7}."""
    c = Fraction(vol_scale)
    if c == 0:
        raise Degenerate("volume scale must be nonzero")
    if lam.dim != _DIM:
        raise DimensionMismatch(f"form must live on dimension {_DIM}")
    p = lam.degree
    out = {}
    for key in combinations(range(1, _DIM + 1), _DIM - p):
        w = lam
        for u in key:
            w = w.wedge(metric.lowered(u))
        coeff = w.coefficient(_TOP)
        if not scalars.is_zero(scalars.as_scalar(coeff)):
            out[key] = coeff / c
    return Form(_DIM, _DIM - p, out)


def lambda2_14_basis(phi: Form, star_phi: Form) -> SolutionSpace:
    """The 14-dimensional component of 2-forms: kernel of a |-> a ^ star phi."""
    _expect(phi, 3)
    _expect(star_phi, 4)
    pairs = list(combinations(range(1, _DIM + 1), 2))
    system = LinearSystem([f"a{i}{j}" for i, j in pairs])
    wedges = [Form.monomial(_DIM, pair).wedge(star_phi) for pair in pairs]
    comps = set()
    for w in wedges:
        comps.update(w.terms)
    for comp in sorted(comps):
        row = {}
        for col, w in enumerate(wedges):
            v = w.terms.get(comp)
            if v is not None:
                row[col] = v
        system.add_row(row)

    def build(vec) -> Form:
        terms = {
            pairs[c]: v
            for c, v in enumerate(vec)
            if not scalars.is_zero(scalars.as_scalar(v))
        }
        return Form(_DIM, 2, terms)

    def coordinatize(form: Form) -> list:
        _expect(form, 2)
        return [form.terms.get(pair, _F0) for pair in pairs]

    space = nullspace(system, build, coordinatize)
    if space.dimension != 14:
        raise WrongDimension(
            f"2-form kernel has dimension {space.dimension}, expected 14"
        )
    return space


def lambda3_27_check(alpha: Form, phi: Form, star_phi: Form) -> bool:
    """True iff alpha ^ phi = 0 and alpha ^ star phi = 0 exactly."""
    _expect(alpha, 3)
    return alpha.wedge(phi).is_zero() and alpha.wedge(star_phi).is_zero()


@dataclass(frozen=True)
class TorsionSet:
    """The four torsion forms of a structure, in its own coframe."""

    tau0: object
    tau1: Form
    tau2: Form
    tau3: Form

    def rescale(self, s) -> "TorsionSet":
        """Torsions of the same structure at volume scale s*c."""
        s = Fraction(s)
        if s <= 0:
            raise ValidationError("scale factor must be a positive rational")
        return TorsionSet(
            tau0=self.tau0 * s,
            tau1=self.tau1,
            tau2=self.tau2 * (1 / s),
            tau3=self.tau3 * s,
        )


class TorsionSystem:
    """The assembled linear system for the torsion unknowns.

    Unknown order: tau0; tau1 components 1..7; tau2 components over
    index pairs in lexicographic order; tau3 components over triples.
    Rows 0..55 are the two structure equations (35 + 21 component rows);
    rows 56..70 are the membership constraints (7 + 7 + 1).  The
    right-hand side sits at column `width`.
    """

    __slots__ = ("labels", "rows", "bryant_count", "width")

    def __init__(self, labels, rows, bryant_count):
        self.labels = labels
        self.rows = rows
        self.bryant_count = bryant_count
        self.width = len(labels)

    @property
    def bryant_rows(self) -> list:
        return self.rows[: self.bryant_count]

    @property
    def membership_rows(self) -> list:
        return [
            {c: v for c, v in row.items() if c < self.width}
            for row in self.rows[self.bryant_count :]
        ]

    def solve(self) -> list:
        return _linalg.solve_unique(self.rows, self.width)

    def membership_kernel_rank(self) -> int:
        """Rank of the structure-equation block restricted to the
        subspace cut out by the membership constraints."""
        kernel = _linalg.kernel_basis(self.membership_rows, self.width)
        rows = []
        for row in self.bryant_rows:
            new_row = {}
            for s, vec in enumerate(kernel):
                total = _F0
                for c, v in row.items():
                    if c < self.width and vec[c]:
                        total = total + v * vec[c]
                if not scalars.is_zero(scalars.as_scalar(total)):
                    new_row[s] = total
            rows.append(new_row)
        return _linalg.rank(rows, len(kernel))


def _expect(form: Form, degree: int) -> None:
    if form.dim != _DIM:
        raise DimensionMismatch(f"form must live on dimension {_DIM}")
    if form.degree != degree:
        raise DegreeMismatch(f"expected a {degree}-form, got degree {form.degree}")


def _descended_differential(algebra: LieAlgebra, form: Form) -> Form:
    """d(form) computed upstairs, checked to have no vertical legs."""
    lifted = form.extend(algebra.dim)
    d = algebra.mc_differential(lifted)
    for key in d.terms:
        if key and key[-1] > _DIM:
            raise ValidationError(
                "form does not descend: differential has vertical components"
            )
    return d.restrict(_DIM)


def torsion_linear_system(
    algebra: LieAlgebra, metric: Metric7, phi: Form, vol_scale=_F1
) -> TorsionSystem:
    """Assemble the 71-row exact system for the 64 torsion unknowns."""
    _expect(phi, 3)
    star_phi = hodge_star(metric, phi, vol_scale)
    d_phi = _descended_differential(algebra, phi)
    d_star_phi = _descended_differential(algebra, star_phi)

    singles = list(range(1, _DIM + 1))
    pairs = list(combinations(singles, 2))
    triples = list(combinations(singles, 3))
    labels = (
        ["t0"]
        + [f"t1_{i}" for i in singles]
        + ["t2_" + "".join(map(str, p)) for p in pairs]
        + ["t3_" + "".join(map(str, t)) for t in triples]
    )
    col_t0 = 0
    col_t1 = {i: 1 + idx for idx, i in enumerate(singles)}
    col_t2 = {p: 8 + idx for idx, p in enumerate(pairs)}
    col_t3 = {t: 29 + idx for idx, t in enumerate(triples)}
    width = len(labels)

    e1_phi = {i: Form.monomial(_DIM, (i,)).wedge(phi) for i in singles}
    e1_star = {i: Form.monomial(_DIM, (i,)).wedge(star_phi) for i in singles}
    e2_phi = {p: Form.monomial(_DIM, p).wedge(phi) for p in pairs}
    e2_star = {p: Form.monomial(_DIM, p).wedge(star_phi) for p in pairs}
    e3_phi = {t: Form.monomial(_DIM, t).wedge(phi) for t in triples}
    e3_star = {t: Form.monomial(_DIM, t).wedge(star_phi) for t in triples}
    star_e3 = {t: hodge_star(metric, Form.monomial(_DIM, t), vol_scale)
               for t in triples}

    rows = []

    def put(row, col, v):
        if not scalars.is_zero(scalars.as_scalar(v)):
            row[col] = v

    # d phi = tau0 star phi + 3 tau1 ^ phi + star tau3: one row per 4-key
    for key in combinations(singles, 4):
        row = {}
        put(row, col_t0, star_phi.terms.get(key, _F0))
        for i in singles:
            put(row, col_t1[i], 3 * e1_phi[i].terms.get(key, _F0))
        for t in triples:
            put(row, col_t3[t], star_e3[t].terms.get(key, _F0))
        put(row, width, d_phi.terms.get(key, _F0))
        rows.append(row)

    # d star phi = 4 tau1 ^ star phi + tau2 ^ phi: one row per 5-key
    for key in combinations(singles, 5):
        row = {}
        for i in singles:
            put(row, col_t1[i], 4 * e1_star[i].terms.get(key, _F0))
        for p in pairs:
            put(row, col_t2[p], e2_phi[p].terms.get(key, _F0))
        put(row, width, d_star_phi.terms.get(key, _F0))
        rows.append(row)

    bryant_count = len(rows)

    # tau2 ^ star phi = 0: one row per 6-key
    for key in combinations(singles, 6):
        row = {}
        for p in pairs:
            put(row, col_t2[p], e2_star[p].terms.get(key, _F0))
        rows.append(row)

    # tau3 ^ phi = 0: one row per 6-key
    for key in combinations(singles, 6):
        row = {}
        for t in triples:
            put(row, col_t3[t], e3_phi[t].terms.get(key, _F0))
        rows.append(row)

    # tau3 ^ star phi = 0: the single top-degree row
    row = {}
    for t in triples:
        put(row, col_t3[t], e3_star[t].terms.get(_TOP, _F0))
    rows.append(row)

    return TorsionSystem(tuple(labels), rows, bryant_count)


def torsion_solve(
    algebra: LieAlgebra, metric: Metric7, phi: Form, vol_scale=_F1
) -> TorsionSet:
    """Unique exact solution of the torsion equations.

    Non-uniqueness or inconsistency of the system signals a non-generic
    3-form or a coframe mismatch and is raised, never patched over.
    """
    system = torsion_linear_system(algebra, metric, phi, vol_scale)
    x = system.solve()

    singles = list(range(1, _DIM + 1))
    pairs = list(combinations(singles, 2))
    triples = list(combinations(singles, 3))
    tau0 = x[0]
    tau1 = Form(
        _DIM, 1, {(i,): x[1 + idx] for idx, i in enumerate(singles) if _nz(x[1 + idx])}
    )
    tau2 = Form(
        _DIM, 2, {p: x[8 + idx] for idx, p in enumerate(pairs) if _nz(x[8 + idx])}
    )
    tau3 = Form(
        _DIM, 3, {t: x[29 + idx] for idx, t in enumerate(triples) if _nz(x[29 + idx])}
    )
    torsions = TorsionSet(tau0, tau1, tau2, tau3)

    res1, res2 = bryant_residual(algebra, metric, phi, torsions, vol_scale)
    if not (res1.is_zero() and res2.is_zero()):
        raise InternalInconsistency("solved torsions fail the structure equations")
    star_phi = hodge_star(metric, phi, vol_scale)
    if not tau2.wedge(star_phi).is_zero():
        raise InternalInconsistency("tau2 escapes its 14-dimensional component")
    if not lambda3_27_check(tau3, phi, star_phi):
        raise InternalInconsistency("tau3 escapes its 27-dimensional component")
    return torsions


def _nz(v) -> bool:
    return not scalars.is_zero(scalars.as_scalar(v))


def bryant_residual(
    algebra: LieAlgebra,
    metric: Metric7,
    phi: Form,
    torsions: TorsionSet,
    vol_scale=_F1,
) -> Tuple[Form, Form]:
    """Defects of both structure equations by direct substitution.

    Recomputes every ingredient from scratch and shares no state with
    torsion_solve beyond the published operations."""
    star_phi = hodge_star(metric, phi, vol_scale)
    d_phi = _descended_differential(algebra, phi)
    d_star_phi = _descended_differential(algebra, star_phi)
    star_tau3 = hodge_star(metric, torsions.tau3, vol_scale)
    res1 = d_phi - (
        star_phi * torsions.tau0 + torsions.tau1.wedge(phi) * 3 + star_tau3
    )
    res2 = d_star_phi - (
        torsions.tau1.wedge(star_phi) * 4 + torsions.tau2.wedge(phi)
    )
    return res1, res2


def calibrate_vol_scale(reference_tau0, torsions_at_unit_scale: TorsionSet) -> Fraction:
    """The volume scale c* at which the solved tau0 meets the reference.

    tau0 scales linearly with the volume scale, so c* is the exact
    quotient reference / tau0(c=1).  The quotient must be a rational
    constant, also when both inputs carry parameters."""
    ref = scalars.as_scalar(reference_tau0)
    if scalars.is_zero(ref):
        raise ZeroReference("reference tau0 is zero")
    t0 = scalars.as_scalar(torsions_at_unit_scale.tau0)
    if scalars.is_zero(t0):
        raise ValidationError("cannot calibrate: solved tau0 vanishes at c=1")
    value = _constant_quotient(ref, t0)
    if value is None:
        raise ValidationError("calibration quotient is not constant")
    return value


def _constant_quotient(ref, t0):
    """ref / t0 as a Fraction when the quotient is constant, else None."""
    if isinstance(ref, Fraction) and isinstance(t0, Fraction):
        return ref / t0
    ratio = ref / t0
    if isinstance(ratio, Fraction):
        return ratio
    if isinstance(ratio, scalars.Polynomial):
        return ratio.constant_value() if ratio.is_constant() else None
    # unreduced quotient: constant k iff num == k * den, k read off at
    # the denominator's leading monomial
    num, den = ratio.num, ratio.den
    lead = den.leading_exponent()
    k = num.coefficient(lead) / den.coefficient(lead)
    if num == den * k:
        return k
    return None
