"""Sparse exact linear algebra against a dense Gaussian oracle."""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from splitg2 import scalars
from splitg2._linalg import (
    FractionDomain,
    PolyDomain,
    kernel_basis,
    mat_det,
    mat_inverse,
    mat_mul,
    rank,
    row_reduce,
    row_reduce_min_fill,
    solve_in_span,
    solve_unique,
)
from splitg2.errors import InconsistentSystem, NonUniqueSolution, SingularMatrix
from splitg2.scalars import Polynomial, RationalFunction

from conftest import dense_kernel, dense_rref, random_fraction


def random_sparse(rng, nrows, width, density=0.5):
    rows = []
    for _ in range(nrows):
        row = {}
        for c in range(width):
            if rng.random() < density:
                v = random_fraction(rng)
                if v:
                    row[c] = v
        rows.append(row)
    return rows


def to_dense(rows, width):
    return [[row.get(c, Fraction(0)) for c in range(width)] for row in rows]


# -- determinant and inverse ------------------------------------------------------


def permanent_style_det(m):
    # Leibniz expansion; fine for n <= 5
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        prod = Fraction(1)
        for i in range(n):
            prod *= m[i][perm[i]]
        total += sign * prod
    return total


def test_det_matches_leibniz(rng):
    for _ in range(20):
        n = rng.randint(1, 4)
        m = [[random_fraction(rng) for _ in range(n)] for _ in range(n)]
        assert mat_det(m) == permanent_style_det(m)


def test_det_singular():
    m = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert mat_det(m) == 0


def test_inverse_round_trip(rng):
    eye3 = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    found = 0
    while found < 10:
        m = [[random_fraction(rng) for _ in range(3)] for _ in range(3)]
        if mat_det(m) == 0:
            continue
        found += 1
        assert mat_mul(m, mat_inverse(m)) == eye3


def test_inverse_rejects_singular():
    m = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]]
    with pytest.raises(SingularMatrix):
        mat_inverse(m)


# -- rank and kernel vs the dense oracle -------------------------------------------


def test_rank_matches_dense(rng):
    for _ in range(25):
        nrows = rng.randint(1, 6)
        width = rng.randint(1, 6)
        rows = random_sparse(rng, nrows, width)
        want, _ = dense_rref(to_dense(rows, width))
        assert rank(rows, width) == want


def test_kernel_matches_dense(rng):
    for _ in range(25):
        nrows = rng.randint(1, 5)
        width = rng.randint(1, 6)
        rows = random_sparse(rng, nrows, width)
        dense = to_dense(rows, width)
        want = dense_kernel(dense, width)
        got = kernel_basis(rows, width)
        assert got == want


def test_kernel_vectors_annihilate(rng):
    for _ in range(15):
        rows = random_sparse(rng, 4, 6)
        for vec in kernel_basis(rows, 6):
            for row in rows:
                s = sum((v * vec[c] for c, v in row.items()), Fraction(0))
                assert s == 0


# -- unique solve ------------------------------------------------------------------


def attach_rhs(rows, width, rhs):
    out = []
    for row, b in zip(rows, rhs):
        row = dict(row)
        if b:
            row[width] = b
        out.append(row)
    return out


def test_solve_unique_recovers_solution(rng):
    for _ in range(20):
        width = rng.randint(1, 5)
        # build a full-rank square system by rejection
        while True:
            m = [[random_fraction(rng) for _ in range(width)] for _ in range(width)]
            if mat_det(m) != 0:
                break
        x = [random_fraction(rng) for _ in range(width)]
        rhs = [sum((m[i][j] * x[j] for j in range(width)), Fraction(0))
               for i in range(width)]
        rows = [{c: v for c, v in enumerate(m[i]) if v} for i in range(width)]
        assert solve_unique(attach_rhs(rows, width, rhs), width) == x


def test_solve_unique_rejects_underdetermined():
    rows = [{0: Fraction(1), 1: Fraction(1), 2: Fraction(3)}]
    with pytest.raises(NonUniqueSolution):
        solve_unique(rows, 2)


def test_solve_unique_rejects_inconsistent():
    rows = [
        {0: Fraction(1), 1: Fraction(2)},
        {0: Fraction(2), 1: Fraction(5)},
    ]
    with pytest.raises(InconsistentSystem):
        solve_unique(rows, 1)


def test_min_fill_agrees_with_fixed_order(rng):
    # both eliminations must produce the same unique solution
    for _ in range(10):
        width = rng.randint(2, 5)
        while True:
            m = [[random_fraction(rng) for _ in range(width)] for _ in range(width)]
            if mat_det(m) != 0:
                break
        x = [random_fraction(rng) for _ in range(width)]
        rhs = [sum((m[i][j] * x[j] for j in range(width)), Fraction(0))
               for i in range(width)]
        rows = [{c: v for c, v in enumerate(m[i]) if v} for i in range(width)]
        aug = attach_rhs(rows, width, rhs)
        dom = FractionDomain()

        work1 = [dict(r) for r in aug]
        p1 = row_reduce(work1, width, dom)
        work2 = [dict(r) for r in aug]
        p2 = row_reduce_min_fill(work2, width, dom)
        assert len(p1) == len(p2) == width

        def extract(work, pivots):
            out = [Fraction(0)] * width
            for col, r in pivots.items():
                b = work[r].get(width, Fraction(0))
                out[col] = b / work[r][col]
            return out

        assert extract(work1, p1) == extract(work2, p2) == x


# -- span membership ---------------------------------------------------------------


def test_solve_in_span_positive(rng):
    for _ in range(15):
        width = rng.randint(2, 6)
        nspan = rng.randint(1, 3)
        span = [[random_fraction(rng) for _ in range(width)] for _ in range(nspan)]
        coeffs = [random_fraction(rng) for _ in range(nspan)]
        target = [sum((coeffs[i] * span[i][j] for i in range(nspan)), Fraction(0))
                  for j in range(width)]
        got = solve_in_span(span, target, width)
        assert got is not None
        rebuilt = [sum((got[i] * span[i][j] for i in range(nspan)), Fraction(0))
                   for j in range(width)]
        assert rebuilt == target


def test_solve_in_span_negative():
    span = [[Fraction(1), Fraction(0), Fraction(0)]]
    target = [Fraction(0), Fraction(1), Fraction(0)]
    assert solve_in_span(span, target, 3) is None


# -- polynomial domain ---------------------------------------------------------------


def test_poly_solve_two_by_two():
    # [[a, 1], [0, a]] x = [a + 1, a]  =>  x = (1, 1), valid whenever a != 0
    a = Polynomial.variable(("a",), "a")
    one = Polynomial.constant(("a",), 1)
    rows = [
        {0: a, 1: one, 2: a + one},
        {1: a, 2: a},
    ]
    x = solve_unique(rows, 2, PolyDomain(("a",)))
    assert scalars.equals(x[0], one)
    assert scalars.equals(x[1], one)


def test_poly_kernel():
    # row (a, -1): kernel spanned by (1, a)
    a = Polynomial.variable(("a",), "a")
    rows = [{0: a, 1: Polynomial.constant(("a",), -1)}]
    basis = kernel_basis(rows, 2)
    assert len(basis) == 1
    v0, v1 = basis[0]
    # a*v0 - v1 == 0
    prod = scalars.as_scalar(a, ("a",))
    lhs = scalars.scalar_sum([prod * v0, v1 * scalars.as_scalar(-1, ("a",))])
    assert scalars.is_zero(lhs)


def test_poly_rank_with_rational_entries():
    a = Polynomial.variable(("a",), "a")
    one = Polynomial.constant(("a",), 1)
    half_a = RationalFunction.make(a, Polynomial.constant(("a",), 2))
    rows = [{0: half_a, 1: one}, {0: a, 1: Polynomial.constant(("a",), 2)}]
    # second row is 2x the first: rank 1
    assert rank(rows, 2) == 1
