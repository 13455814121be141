# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot kernels (see ``_kernels_py`` for the contract)."""
from math import gcd


def rref_int(list rows, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t prow = 0, col, i, j, sel, t, ns
    cdef list pivots = []
    cdef list piv, row, support
    cdef object p, a, g, mp, ma, c
    for col in range(ncols):
        if prow == nrows:
            break
        sel = -1
        for i in range(prow, nrows):
            if (<list>rows[i])[col]:
                sel = i
                break
        if sel < 0:
            continue
        if sel != prow:
            rows[sel], rows[prow] = rows[prow], rows[sel]
        piv = <list>rows[prow]
        if piv[col] < 0:
            piv = [-v for v in piv]
            rows[prow] = piv
        p = piv[col]
        support = [j for j in range(col, ncols) if piv[j]]
        ns = len(support)
        for i in range(nrows):
            if i == prow:
                continue
            row = <list>rows[i]
            a = row[col]
            if not a:
                continue
            g = gcd(p, a)
            mp = p // g
            ma = a // g
            if mp != 1:
                row = [v * mp for v in row]
            for t in range(ns):
                j = <Py_ssize_t>support[t]
                row[j] = row[j] - ma * piv[j]
            c = gcd(*row)
            if c > 1:
                row = [v // c for v in row]
            rows[i] = row
        pivots.append(col)
        prow += 1
    return prow, pivots


def mul_terms(dict a, dict b, tuple weights, long maxdeg):
    cdef dict out = {}
    cdef Py_ssize_t n = len(weights), i
    cdef long da, db
    cdef tuple ma, mb
    cdef list bd
    cdef object ca, cb, m
    if not a or not b:
        return out
    bd = []
    for mb, cb in b.items():
        db = 0
        for i in range(n):
            db += <long>weights[i] * <long>mb[i]
        bd.append((mb, cb, db))
    for ma, ca in a.items():
        da = 0
        for i in range(n):
            da += <long>weights[i] * <long>ma[i]
        if maxdeg >= 0 and da > maxdeg:
            continue
        for mb, cb, db in bd:
            if maxdeg >= 0 and da + db > maxdeg:
                continue
            m = tuple([<long>ma[i] + <long>mb[i] for i in range(n)])
            out[m] = out.get(m, 0) + ca * cb
    return {m: ca for m, ca in out.items() if ca}
