"""Exact rational feasibility for A·lam = b, lam >= 0.

Phase-1 simplex with Bland's rule on a condensed tableau (nonbasic columns
only).  Each row is kept as integer numerators over its own positive
denominator and reduced by its gcd after a pivot, so rows untouched by a
pivot cost nothing.  No floating point is involved anywhere.

A feasible system yields a nonnegative solution; an infeasible one yields a
Farkas vector y with yᵀA <= 0 and yᵀb > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Union


BLAND = "bland"
DANTZIG = "dantzig"


class LPDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class FeasibilitySystem:
    A: tuple[tuple, ...]
    b: tuple

    def __init__(self, A: Sequence[Sequence], b: Sequence):
        rows = tuple(tuple(_normalize(v) for v in row) for row in A)
        rhs = tuple(_normalize(v) for v in b)
        self._set(rows, rhs)

    def _set(self, rows, rhs):
        if not rows or not rows[0]:
            raise LPDimensionError("system needs at least one row and one column")
        k = len(rows[0])
        if any(len(r) != k for r in rows):
            raise LPDimensionError("ragged constraint matrix")
        if len(rhs) != len(rows):
            raise LPDimensionError(f"{len(rows)} rows but {len(rhs)} right-hand sides")
        object.__setattr__(self, "A", rows)
        object.__setattr__(self, "b", rhs)

    @classmethod
    def from_integers(cls, A: Sequence[Sequence[int]], b: Sequence[int]) -> "FeasibilitySystem":
        """Skip per-entry normalisation; every entry must already be an int."""
        obj = cls.__new__(cls)
        obj._set(tuple(tuple(row) for row in A), tuple(b))
        return obj

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.A), len(self.A[0])


@dataclass(frozen=True)
class Feasible:
    lam: tuple[Fraction, ...]

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]

    feasible = False


LpVerdict = Union[Feasible, Infeasible]


def verify_feasible(sys: FeasibilitySystem, lam: Sequence) -> bool:
    m, k = sys.shape
    if len(lam) != k:
        return False
    lam = [Fraction(v) for v in lam]
    if any(v < 0 for v in lam):
        return False
    return all(sum(a * v for a, v in zip(row, lam)) == bi for row, bi in zip(sys.A, sys.b))


def verify_farkas(sys: FeasibilitySystem, y: Sequence) -> bool:
    m, k = sys.shape
    if len(y) != m:
        return False
    y = [Fraction(v) for v in y]
    for j in range(k):
        if sum(y[i] * sys.A[i][j] for i in range(m)) > 0:
            return False
    return sum(yi * bi for yi, bi in zip(y, sys.b)) > 0


def verify(sys: FeasibilitySystem, verdict: LpVerdict) -> bool:
    if isinstance(verdict, Feasible):
        return verify_feasible(sys, verdict.lam)
    return verify_farkas(sys, verdict.farkas)


def _normalize(v):
    if isinstance(v, int):
        return v
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def _integer_rows(sys: FeasibilitySystem):
    """Scale each row to integers with a nonnegative right-hand side."""
    rows, scales = [], []
    for row, bi in zip(sys.A, sys.b):
        dens = [v.denominator for v in row if type(v) is not int]
        if type(bi) is not int:
            dens.append(bi.denominator)
        s = lcm(*dens) if dens else 1
        if bi < 0:
            s = -s
        if s == 1:
            rows.append(list(row) + [bi])
        else:
            rows.append([int(v * s) for v in row] + [int(bi * s)])
        scales.append(s)
    return rows, scales


def solve_feasibility(sys: FeasibilitySystem, rule: str = BLAND) -> LpVerdict:
    """Decide feasibility of ``sys`` and return a certificate either way.

    ``rule="bland"`` enters the lowest-index column with negative reduced
    cost and breaks ratio ties by lowest basic index.  ``rule="dantzig"``
    enters the most negative reduced cost and breaks ratio ties
    lexicographically on the rows of B^-1; both rules rule out cycling.  The
    Dantzig variant takes far fewer pivots on the heavily degenerate
    witness systems.
    """
    if rule not in (BLAND, DANTZIG):
        raise ValueError(f"unknown pivoting rule {rule!r}")
    m, k = sys.shape
    rows, scales = _integer_rows(sys)

    # starting basis: unit columns (slacks) where available, artificials elsewhere
    basis = [-1] * m
    for j, col in enumerate(zip(*rows)):
        if j == k:
            break
        if col.count(0) == m - 1:
            i = next(t for t, v in enumerate(col) if v)
            if col[i] == 1 and basis[i] < 0:
                basis[i] = j
    start_basis = list(basis)
    nart = 0
    for i in range(m):
        if basis[i] < 0:
            basis[i] = k + nart
            start_basis[i] = k + nart
            nart += 1
    art_rows = [i for i in range(m) if basis[i] >= k]

    # Condensed tableau over the nonbasic variables, last column the rhs.
    # Row i holds integer numerators over its own positive denominator den[i].
    in_basis = set(basis)
    nonbasic = [j for j in range(k) if j not in in_basis]
    T = [[row[j] for j in nonbasic] + [row[k]] for row in rows]
    den = [1] * m
    z = [0] * (len(nonbasic) + 1)
    for i in art_rows:
        z = [a - b for a, b in zip(z, T[i])]
    zden = 1

    bland = rule == BLAND
    while z[-1] != 0:
        s = -1
        if bland:
            for c, j in enumerate(nonbasic):
                if j < k and z[c] < 0 and (s < 0 or j < nonbasic[s]):
                    s = c
        else:
            best = 0
            for c, j in enumerate(nonbasic):
                if j < k and z[c] < best:
                    best = z[c]
                    s = c
        if s < 0:
            break
        r = -1
        lexcols = None
        for i in range(m):
            a = T[i][s]
            if a > 0:
                if r < 0:
                    r = i
                    continue
                lhs = T[i][-1] * T[r][s]
                rhs = T[r][-1] * a
                if lhs < rhs:
                    r = i
                elif lhs == rhs:
                    if bland:
                        if basis[i] < basis[r]:
                            r = i
                    else:
                        if lexcols is None:
                            pos = {j: c for c, j in enumerate(nonbasic)}
                            lexcols = [(pos.get(j, -1), j) for j in start_basis]
                        if _lex_less(T, den, basis, lexcols, i, r, s):
                            r = i
        prow = T[r]
        piv = prow[s]
        dr = den[r]
        for i in range(m):
            if i == r:
                continue
            row = T[i]
            f = row[s]
            if f == 0:
                continue
            new = [v * piv - f * pv for v, pv in zip(row, prow)]
            new[s] = -f * dr
            d = den[i] * piv
            g = gcd(d, *new)
            if g > 1:
                new = [v // g for v in new]
                d //= g
            T[i] = new
            den[i] = d
        f = z[s]
        if f:
            new = [v * piv - f * pv for v, pv in zip(z, prow)]
            new[s] = -f * dr
            zd = zden * piv
            g = gcd(zd, *new)
            if g > 1:
                new = [v // g for v in new]
                zd //= g
            z, zden = new, zd
        prow[s] = dr
        den[r] = piv
        nonbasic[s], basis[r] = basis[r], nonbasic[s]

    if z[-1] == 0:
        lam = [Fraction(0)] * k
        for i, j in enumerate(basis):
            if j < k:
                lam[j] = Fraction(T[i][-1], den[i])
        return Feasible(tuple(lam))

    # y = c_B B^-1 from the reduced costs of the starting basis columns
    position = {j: c for c, j in enumerate(nonbasic)}
    y = []
    for i in range(m):
        j = start_basis[i]
        cost = zden if j >= k else 0
        y.append(cost - z[position[j]] if j in position else cost)
    farkas = [yi * s for yi, s in zip(y, scales)]
    g = 0
    for v in farkas:
        g = gcd(g, v)
    return Infeasible(tuple(Fraction(v // g) for v in farkas))


def _lex_less(T, den, basis, lexcols, i, r, s):
    """Is row i of B^-1 / T[i][s] lexicographically below row r of B^-1 / T[r][s]?

    Column t of B^-1 is the current column of the variable that started out
    basic in row t.
    """
    ai, ar = T[i][s], T[r][s]
    Ti, Tr = T[i], T[r]
    for c, j in lexcols:
        if c >= 0:
            vi, vr = Ti[c], Tr[c]
        else:
            vi = den[i] if basis[i] == j else 0
            vr = den[r] if basis[r] == j else 0
        lhs, rhs = vi * ar, vr * ai
        if lhs != rhs:
            return lhs < rhs
    return False
