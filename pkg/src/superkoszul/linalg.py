"""Sparse exact linear algebra over the rationals.

Vectors are dicts mapping column index -> nonzero Fraction.  Ranks are
computed by fraction-free (Bareiss) elimination on integer-cleared rows,
which keeps intermediate entries as exact integers of controlled size.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

SparseVec = dict


def vec_add(a: SparseVec, b: SparseVec, scale: Fraction = Fraction(1)) -> SparseVec:
    out = dict(a)
    for k, v in b.items():
        n = out.get(k, Fraction(0)) + scale * v
        if n:
            out[k] = n
        else:
            out.pop(k, None)
    return out


def vec_scale(a: SparseVec, c: Fraction) -> SparseVec:
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def _clear_denominators(row: SparseVec) -> dict:
    lcm = 1
    for v in row.values():
        f = Fraction(v)
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    out = {}
    g = 0
    for k, v in row.items():
        n = int(Fraction(v) * lcm)
        if n:
            out[k] = n
            g = gcd(g, abs(n))
    if g > 1:
        out = {k: n // g for k, n in out.items()}
    return out


def rank(rows, ncols: int | None = None) -> int:
    """Rank of the matrix whose rows are sparse vectors (any hashable keys).

    Fraction-free (Bareiss) elimination: every surviving row is updated
    against every pivot, so the division by the previous pivot is exact.
    """
    work = [r for r in (_clear_denominators(dict(row)) for row in rows) if r]
    r = 0
    prev = 1
    while work:
        # prefer short rows with small entries as pivots
        work.sort(key=lambda row: (len(row), min(map(abs, row.values()))))
        pivot_row = work.pop(0)
        pc = min(pivot_row, key=lambda k: (abs(pivot_row[k]), repr(k)))
        pv = pivot_row[pc]
        r += 1
        nxt = []
        for row in work:
            c = row.get(pc, 0)
            keys = set(row) | set(pivot_row) if c else row.keys()
            new = {}
            for k in keys:
                n = pv * row.get(k, 0) - c * pivot_row.get(k, 0)
                if n:
                    new[k] = n // prev  # exact by the Bareiss identity
            if new:
                nxt.append(new)
        prev = pv
        work = nxt
    return r


class Echelon:
    """A reduced echelon basis of a subspace, supporting residue computation.

    Rows are kept pivot-normalized (pivot coefficient 1) and mutually reduced,
    so ``reduce`` maps a vector to its canonical representative modulo the
    subspace: the result has zero coordinates at every pivot.  With
    ``track=True`` each row also remembers its expression as a combination of
    the tagged vectors originally added, so membership certificates come out
    in the caller's terms.
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}  # pivot key -> SparseVec with that pivot = 1
        self.combos: dict | None = {} if track else None  # pivot -> {tag: coeff}
        self._order: list = []  # pivot insertion order

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: SparseVec) -> SparseVec:
        out, _ = self.reduce_with_coords(vec)
        return out

    def reduce_with_coords(self, vec: SparseVec):
        """Residue of vec mod the subspace plus its coordinates on the rows."""
        out = dict(vec)
        coords: dict = {}
        changed = True
        while changed:
            changed = False
            for p, row in self.rows.items():
                c = out.get(p)
                if c:
                    coords[p] = coords.get(p, Fraction(0)) + c
                    for k, v in row.items():
                        n = out.get(k, Fraction(0)) - c * v
                        if n:
                            out[k] = n
                        else:
                            out.pop(k, None)
                    changed = True
        return out, coords

    def add(self, vec: SparseVec, tag=None) -> bool:
        """Insert vec if independent of the current rows.  Returns True if added."""
        res, coords = self.reduce_with_coords(vec)
        if not res:
            return False
        p = min(res, key=repr)
        c = res[p]
        row = {k: v / c for k, v in res.items()}
        if self.combos is not None:
            combo = {tag: Fraction(1, 1) / c}
            for q, x in coords.items():
                for t, v in self.combos[q].items():
                    n = combo.get(t, Fraction(0)) - x * v / c
                    if n:
                        combo[t] = n
                    else:
                        combo.pop(t, None)
        # back-substitute into existing rows so the basis stays reduced
        for q, r in self.rows.items():
            x = r.get(p)
            if x:
                for k, v in row.items():
                    n = r.get(k, Fraction(0)) - x * v
                    if n:
                        r[k] = n
                    else:
                        r.pop(k, None)
                if self.combos is not None:
                    cq = self.combos[q]
                    for t, v in combo.items():
                        n = cq.get(t, Fraction(0)) - x * v
                        if n:
                            cq[t] = n
                        else:
                            cq.pop(t, None)
        self.rows[p] = row
        if self.combos is not None:
            self.combos[p] = combo
        self._order.append(p)
        return True

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)

    def combination(self, vec: SparseVec):
        """Express vec as {tag: coeff} over the added vectors, or None."""
        if self.combos is None:
            raise ValueError("Echelon(track=True) required")
        res, coords = self.reduce_with_coords(vec)
        if res:
            return None
        out: dict = {}
        for p, c in coords.items():
            for t, v in self.combos[p].items():
                n = out.get(t, Fraction(0)) + c * v
                if n:
                    out[t] = n
                else:
                    out.pop(t, None)
        return out

    def pivots(self):
        return set(self.rows)

    def basis(self):
        return [dict(self.rows[p]) for p in self._order]


def span_dim(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.dim
