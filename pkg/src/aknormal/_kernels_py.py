"""Pure-Python versions of the hot kernels.

Must stay call-compatible with ``_kernels.pyx``; the two are swapped at import
time by :mod:`aknormal._backend`.
"""
from math import gcd


def rref_int(rows, ncols):
    """Fraction-free Gauss-Jordan elimination on integer rows, in place.

    Every row is kept primitive (content divided out) after each update, so the
    entries stay small. Returns ``(rank, pivots)``; rows ``0..rank-1`` are the
    nonzero echelon rows, each with a positive pivot and zeros in every other
    pivot column.
    """
    nrows = len(rows)
    pivots = []
    prow = 0
    for col in range(ncols):
        if prow == nrows:
            break
        sel = -1
        for i in range(prow, nrows):
            if rows[i][col]:
                sel = i
                break
        if sel < 0:
            continue
        if sel != prow:
            rows[sel], rows[prow] = rows[prow], rows[sel]
        piv = rows[prow]
        if piv[col] < 0:
            piv = [-v for v in piv]
            rows[prow] = piv
        p = piv[col]
        support = [j for j in range(col, ncols) if piv[j]]
        for i in range(nrows):
            if i == prow:
                continue
            row = rows[i]
            a = row[col]
            if not a:
                continue
            g = gcd(p, a)
            mp = p // g
            ma = a // g
            if mp != 1:
                row = [v * mp for v in row]
            for j in support:
                row[j] -= ma * piv[j]
            c = gcd(*row)
            if c > 1:
                row = [v // c for v in row]
            rows[i] = row
        pivots.append(col)
        prow += 1
    return prow, pivots


def mul_terms(a, b, weights, maxdeg):
    """Sparse product of two term dicts, dropping monomials above ``maxdeg``.

    ``weights`` is the grading vector; ``maxdeg < 0`` disables truncation.
    """
    out = {}
    if not a or not b:
        return out
    n = len(weights)
    if maxdeg >= 0:
        bd = [(m, c, sum(weights[i] * m[i] for i in range(n))) for m, c in b.items()]
        for ma, ca in a.items():
            da = sum(weights[i] * ma[i] for i in range(n))
            if da > maxdeg:
                continue
            for mb, cb, db in bd:
                if da + db > maxdeg:
                    continue
                m = tuple([ma[i] + mb[i] for i in range(n)])
                out[m] = out.get(m, 0) + ca * cb
    else:
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple([ma[i] + mb[i] for i in range(n)])
                out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}
