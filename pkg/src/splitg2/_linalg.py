"""Exact linear algebra:

* dense helpers over Fraction (inverse, determinant),
* a sparse Gauss-Jordan engine that works over the rationals or, after
  denominator clearing, over a polynomial ring with cross-multiplication
  row updates and content/monomial row normalization (fraction free:
  no polynomial division, no gcd).

Rows are dicts from column index to nonzero entries.  Columns
0..width-1 are unknowns eliminated in ascending order (deterministic
pivoting); any higher column indices are carried along, which is how
augmented right-hand sides travel through the elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .errors import InconsistentSystem, NonUniqueSolution, SingularMatrix
from .scalars import Polynomial, RationalFunction

_F0 = Fraction(0)
_F1 = Fraction(1)


# -- dense Fraction helpers -------------------------------------------------


def mat_det(rows) -> Fraction:
    """Determinant of a dense square Fraction matrix."""
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    det = _F1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return _F0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def mat_inverse(rows) -> list:
    """Exact inverse of a dense square Fraction matrix."""
    n = len(rows)
    m = [list(map(Fraction, r)) + [_F1 if i == j else _F0 for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def mat_mul(a, b) -> list:
    rows = len(a)
    inner = len(b)
    cols = len(b[0])
    out = [[_F0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            x = ai[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += x * bk[j]
    return out


# -- domains for the sparse engine ------------------------------------------


class FractionDomain:
    """Row entries are Fractions; classical elimination."""

    def size(self, entry) -> int:
        return 1

    def is_zero(self, entry) -> bool:
        return not entry

    def combine(self, p, row, f, prow, col):
        """p*row - f*prow scaled back by p (classical update), col removed."""
        ratio = f / p
        out = {}
        for c in row:
            if c != col:
                out[c] = row[c]
        for c, v in prow.items():
            if c == col:
                continue
            cur = out.get(c)
            nxt = (cur if cur is not None else _F0) - ratio * v
            if nxt:
                out[c] = nxt
            else:
                out.pop(c, None)
        return out

    def div(self, a, b):
        return a / b

    def neg_div(self, a, b):
        return -a / b


class PolyDomain:
    """Row entries are Polynomials; cross-multiplication elimination."""

    def __init__(self, alphabet: tuple):
        self.alphabet = alphabet

    def size(self, entry) -> int:
        return len(entry.terms)

    def is_zero(self, entry) -> bool:
        return entry.is_zero()

    def combine(self, p, row, f, prow, col):
        out = {}
        for c in row:
            if c != col:
                out[c] = p * row[c]
        for c, v in prow.items():
            if c == col:
                continue
            cur = out.get(c)
            nxt = cur - f * v if cur is not None else -(f * v)
            if nxt.is_zero():
                out.pop(c, None)
            else:
                out[c] = nxt
        return normalize_poly_row(out, self.alphabet)

    def div(self, a, b):
        return RationalFunction.make(a, b)

    def neg_div(self, a, b):
        return RationalFunction.make(-a, b)


def normalize_poly_row(row: dict, alphabet: tuple) -> dict:
    """Divide a polynomial row by its rational content and monomial content."""
    if not row:
        return row
    num_gcd = 0
    den_lcm = 1
    lo = None
    for entry in row.values():
        c = entry.content
        num_gcd = gcd(num_gcd, c.numerator)
        den_lcm = lcm(den_lcm, c.denominator)
        e = entry.min_exponents()
        if lo is None:
            lo = list(e)
        else:
            for i, x in enumerate(e):
                if x < lo[i]:
                    lo[i] = x
    scale = Fraction(num_gcd, den_lcm)
    shift = tuple(lo)
    if scale == 1 and not any(shift):
        return row
    out = {}
    for c, entry in row.items():
        entry = Polynomial(alphabet, entry.content / scale, entry.terms)
        if any(shift):
            entry = entry.monomial_shift(shift)
        out[c] = entry
    return out


def clear_row_denominators(row: dict, alphabet: tuple) -> dict:
    """Turn mixed scalar entries into Polynomial entries times one common
    (dropped) denominator; preserves the row's solution set.

    Invariant while scanning: out[k] == original[k] * cleared, where
    `cleared` is the product of the denominators met so far.
    """
    out = {}
    cleared = Polynomial.constant(alphabet, 1)
    for c in sorted(row):
        v = row[c]
        if isinstance(v, int):
            v = Fraction(v)
        if isinstance(v, Fraction):
            if not v:
                continue
            out[c] = Polynomial.constant(alphabet, v) * cleared
        elif isinstance(v, Polynomial):
            if v.is_zero():
                continue
            out[c] = v * cleared
        elif isinstance(v, RationalFunction):
            if v.is_zero():
                continue
            if v.den.is_constant():
                out[c] = (v.num / v.den.constant_value()) * cleared
            else:
                for k in out:
                    out[k] = out[k] * v.den
                out[c] = v.num * cleared
                cleared = cleared * v.den
        else:
            raise TypeError(f"not a scalar entry: {v!r}")
    return normalize_poly_row(out, alphabet)


def row_reduce(rows: list, width: int, domain) -> dict:
    """Full Gauss-Jordan elimination in place; returns {pivot col: row index}.

    Columns are pivoted in ascending order, which fixes the echelon form
    (and hence kernel bases) deterministically.
    """
    pivots: dict = {}
    pivot_rows = set()
    for col in range(width):
        best = None
        for r, row in enumerate(rows):
            if r in pivot_rows:
                continue
            e = row.get(col)
            if e is None:
                continue
            key = (domain.size(e), len(row), r)
            if best is None or key < best[0]:
                best = (key, r)
        if best is None:
            continue
        r = best[1]
        pivots[col] = r
        pivot_rows.add(r)
        prow = rows[r]
        p = prow[col]
        for r2 in range(len(rows)):
            if r2 == r:
                continue
            row2 = rows[r2]
            f = row2.get(col)
            if f is None:
                continue
            rows[r2] = domain.combine(p, row2, f, prow, col)
    return pivots


def row_reduce_min_fill(rows: list, width: int, domain) -> dict:
    """Full Gauss-Jordan with a fill-minimizing pivot order.

    Each step picks the entry with the smallest Markowitz cost
    (row nonzeros - 1) * (column nonzeros - 1), breaking ties by entry
    size, then column, then row index, so the run is deterministic.  The
    pivot order (and on singular systems the pivot set) differs from
    `row_reduce`; eliminated values do not.  Intended for solves where
    every unknown must end up pivoted, where it avoids the severe
    intermediate blowup a fixed column order can cause over polynomial
    entries.
    """
    pivots: dict = {}
    pivot_rows = set()
    while True:
        col_count: dict = {}
        for r, row in enumerate(rows):
            if r in pivot_rows:
                continue
            for c in row:
                if c < width and c not in pivots:
                    col_count[c] = col_count.get(c, 0) + 1
        best = None
        choice = None
        for r, row in enumerate(rows):
            if r in pivot_rows:
                continue
            live = [c for c in row if c < width and c not in pivots]
            if not live:
                continue
            weight = len(row) - 1
            for c in live:
                key = (
                    weight * (col_count[c] - 1),
                    domain.size(row[c]),
                    c,
                    r,
                )
                if best is None or key < best:
                    best = key
                    choice = (c, r)
        if choice is None:
            return pivots
        col, r = choice
        pivots[col] = r
        pivot_rows.add(r)
        prow = rows[r]
        p = prow[col]
        for r2 in range(len(rows)):
            if r2 == r:
                continue
            row2 = rows[r2]
            f = row2.get(col)
            if f is None:
                continue
            rows[r2] = domain.combine(p, row2, f, prow, col)


def detect_domain(rows, default_alphabet: tuple = ()):
    """FractionDomain unless some entry carries parameters."""
    for row in rows:
        for v in row.values():
            if isinstance(v, (Polynomial, RationalFunction)):
                return PolyDomain(v.alphabet)
    return FractionDomain() if not default_alphabet else PolyDomain(default_alphabet)


def prepare_rows(rows, domain):
    """Copy rows, dropping zeros; clear denominators for the poly domain."""
    out = []
    if isinstance(domain, PolyDomain):
        for row in rows:
            out.append(clear_row_denominators(row, domain.alphabet))
    else:
        for row in rows:
            clean = {}
            for c, v in row.items():
                v = Fraction(v) if isinstance(v, int) else v
                if v:
                    clean[c] = v
            out.append(clean)
    return out


def rank(rows, width: int, domain=None) -> int:
    domain = domain or detect_domain(rows)
    work = prepare_rows(rows, domain)
    return len(row_reduce(work, width, domain))


def kernel_basis(rows, width: int, domain=None) -> list:
    """Basis of the homogeneous kernel, one vector per free column.

    The basis is deterministic: free columns in ascending order, each
    basis vector has 1 at its free column.
    """
    domain = domain or detect_domain(rows)
    work = prepare_rows(rows, domain)
    pivots = row_reduce(work, width, domain)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [_F0] * width
        vec[fc] = _F1
        for col, r in pivots.items():
            row = work[r]
            a = row.get(fc)
            if a is not None:
                vec[col] = domain.neg_div(a, row[col])
        basis.append(vec)
    return basis


def solve_unique(rows, width: int, domain=None) -> list:
    """Solve an augmented system (RHS at column index `width`) that is
    required to have exactly one solution.

    Uses the fill-minimizing pivot order: the solution is unique, so the
    order cannot change the answer, and on polynomial entries a fixed
    column order can make intermediate rows explode.
    """
    domain = domain or detect_domain(rows)
    work = prepare_rows(rows, domain)
    pivots = row_reduce_min_fill(work, width, domain)
    if len(pivots) < width:
        free = [c for c in range(width) if c not in pivots]
        raise NonUniqueSolution(f"free unknowns at columns {free}")
    pivot_rows = set(pivots.values())
    for r, row in enumerate(work):
        if r not in pivot_rows and row:
            raise InconsistentSystem("zero row with nonzero right-hand side")
    x = [_F0] * width
    for col, r in pivots.items():
        row = work[r]
        b = row.get(width)
        if b is None:
            x[col] = _F0
        else:
            x[col] = domain.div(b, row[col])
    return x


def solve_in_span(span_rows: list, target: list, width: int):
    """Coefficients expressing `target` over `span_rows`, or None.

    Both span vectors and the target are coordinate lists of length
    `width` over any one scalar domain.
    """
    rows = []
    for j in range(width):
        row = {}
        for i, vec in enumerate(span_rows):
            v = vec[j]
            if v:
                row[i] = v
        t = target[j]
        if t:
            row[len(span_rows)] = t
        if row:
            rows.append(row)
    domain = detect_domain(rows)
    work = prepare_rows(rows, domain)
    pivots = row_reduce(work, len(span_rows), domain)
    pivot_rows = set(pivots.values())
    for r, row in enumerate(work):
        if r not in pivot_rows and row:
            return None
    coeffs = [_F0] * len(span_rows)
    for col, r in pivots.items():
        row = work[r]
        b = row.get(len(span_rows))
        coeffs[col] = domain.div(b, row[col]) if b is not None else _F0
    return coeffs
