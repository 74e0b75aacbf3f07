"""Exact ranks of sparse rational matrices.

The production path clears denominators row by row and eliminates over the
integers (fraction-free, rows kept primitive by their content gcd).  Pivots
are chosen Markowitz style: the sparsest remaining row, then the sparsest
column inside it, ties broken by index.  ``dense_rank`` is the independent
oracle used by the tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def _integer_row(entries: dict) -> dict:
    den = 1
    for v in entries.values():
        v = Fraction(v)
        den = lcm(den, v.denominator)
    out = {}
    for k, v in entries.items():
        v = Fraction(v) * den
        if v:
            out[k] = int(v)
    return _primitive(out)


def sparse_rank(rows) -> int:
    """Rank over Q of a matrix given as an iterable of ``{column: value}`` rows."""
    work = {}
    for i, r in enumerate(rows):
        r = _integer_row(r)
        if r:
            work[i] = r
    cols: dict = {}
    for i, r in work.items():
        for c in r:
            cols.setdefault(c, set()).add(i)
    rank = 0
    while work:
        pi = min(work, key=lambda i: (len(work[i]), i))
        prow = work.pop(pi)
        pc = min(prow, key=lambda c: (len(cols[c]), abs(prow[c]), c))
        for c in prow:
            cols[c].discard(pi)
        a = prow[pc]
        for ri in sorted(cols[pc]):
            row = work[ri]
            b = row[pc]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {}
            for c, v in row.items():
                new[c] = v * fa
            for c, v in prow.items():
                nv = new.get(c, 0) - v * fb
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            for c in row:
                if c not in new:
                    cols[c].discard(ri)
            for c in new:
                if c not in row:
                    cols.setdefault(c, set()).add(ri)
            if new:
                work[ri] = _primitive(new)
            else:
                del work[ri]
        rank += 1
    return rank


def dense_rank(matrix) -> int:
    """Rank over Q by textbook Gaussian elimination on Fractions."""
    m = [[Fraction(x) for x in row] for row in matrix]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def columns_to_rows(columns) -> list[dict]:
    """Transpose a list of ``{row: value}`` columns into ``{col: value}`` rows."""
    rows: dict = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    return [rows[i] for i in sorted(rows)]


def in_column_span(columns, target: dict) -> bool:
    """Whether ``target`` (``{row: value}``) lies in the span of ``columns``."""
    if not any(target.values()):
        return True
    r0 = sparse_rank(columns)
    return sparse_rank(list(columns) + [target]) == r0
