"""Exact linear systems over the integers.

Elimination is fraction-free (Bareiss): every intermediate entry is a minor
of the input, so the integer divisions below are exact.
"""

from fractions import Fraction
from math import lcm


def echelon(matrix, ncols):
    """Fraction-free row echelon form of ``matrix`` (list of int rows).

    Only the first ``ncols`` columns are used as pivot columns; any further
    columns ride along (right-hand sides).  Returns ``(rows, pivots)`` where
    ``pivots`` lists the pivot column of each leading row.
    """
    m = [list(row) for row in matrix]
    nrows = len(m)
    width = len(m[0]) if m else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        top = m[r]
        a = top[c]
        for i in range(r + 1, nrows):
            row = m[i]
            b = row[c]
            if b == 0:
                if prev != 1 or a != 1:
                    # keep the Bareiss invariant: scale by a/prev exactly
                    for j in range(c, width):
                        if row[j]:
                            q, rem = divmod(a * row[j], prev)
                            assert rem == 0
                            row[j] = q
                continue
            for j in range(c, width):
                q, rem = divmod(a * row[j] - b * top[j], prev)
                assert rem == 0
                row[j] = q
        # rows above r that were skipped by the loop keep their scale; rows
        # below are now on the common denominator a
        prev = a
        pivots.append(c)
        r += 1
    return m, pivots


def solve_particular(ech, pivots, ncols, rhs_col):
    """Particular rational solution for one right-hand-side column.

    Free variables are set to zero.  Returns a list of Fractions, or None
    when the system is inconsistent.
    """
    rank = len(pivots)
    for i in range(rank, len(ech)):
        if ech[i][rhs_col]:
            return None
    x = [Fraction(0)] * ncols
    for i in range(rank - 1, -1, -1):
        c = pivots[i]
        row = ech[i]
        s = Fraction(row[rhs_col])
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x


def clear_denominators(xs):
    """Return ``(q, ints)`` with ``ints[i] == q * xs[i]`` and q minimal."""
    q = 1
    for v in xs:
        q = lcm(q, v.denominator)
    return q, [int(v * q) for v in xs]
