"""Finite windows of multigraded complexes with exact-rank cohomology.

A ComplexWindow knows the slices of a complex for cohomological degrees in a
closed interval [lo, hi] (missing slices are zero) and the differentials
between them; outside the interval the complex is unknown, so cohomology is
only reported at interior degrees lo < n < hi.  Each slice is a GradedSpace
whose basis degrees all have ``coh`` equal to the slice index; differentials
have degree (+1,0,0) and therefore preserve the (s,h)-bidegree, so every rank
computation splits into independent (s,h)-lines.
"""

from __future__ import annotations

from fractions import Fraction

from .degrees import COH1, Degree, GradedMap, GradedSpace
from .linalg import Echelon, rank


class WindowTooSmall(ValueError):
    """Cohomology requested at a non-interior degree."""


class SignIncoherence(ValueError):
    """A totalization failed to square to zero."""


class NotAStaircase(ValueError):
    """A filtration violates d(G_i) <= G_(i+1)."""


_EMPTY = GradedSpace([])


class ComplexWindow:
    def __init__(self, lo: int, hi: int, slices: dict, diffs: dict):
        """slices: coh -> GradedSpace; diffs: coh n -> GradedMap slice_n -> slice_(n+1)."""
        if lo > hi:
            raise ValueError("empty window")
        self.lo = lo
        self.hi = hi
        self.slices = {n: s for n, s in slices.items() if lo <= n <= hi and s.dim}
        for n, s in self.slices.items():
            for d in s.degrees:
                if d.coh != n:
                    raise ValueError(f"slice {n} contains basis of coh degree {d.coh}")
        self.diffs = {}
        for n, f in diffs.items():
            if f is None or f.is_zero():
                continue
            if not (lo <= n < hi):
                continue
            if f.degree != COH1:
                raise ValueError("differentials must have degree (+1,0,0)")
            self.diffs[n] = f

    def slice(self, n: int) -> GradedSpace:
        return self.slices.get(n, _EMPTY)

    def diff(self, n: int) -> GradedMap:
        d = self.diffs.get(n)
        if d is None:
            return GradedMap.zero(self.slice(n), self.slice(n + 1), COH1)
        return d

    def interior(self) -> range:
        return range(self.lo + 1, self.hi)

    def verify_differential(self) -> bool:
        for n in range(self.lo, self.hi - 1):
            d1 = self.diffs.get(n)
            d2 = self.diffs.get(n + 1)
            if d1 is None or d2 is None:
                continue
            if not d2.compose(d1).is_zero():
                return False
        return True

    # -- cohomology -----------------------------------------------------------

    def _line_blocks(self, n: int):
        """Basis indices of slice n grouped by (s,h)."""
        out: dict = {}
        for i, d in enumerate(self.slice(n).degrees):
            out.setdefault((d.s, d.h), []).append(i)
        return out

    def _rank_line(self, n: int, line) -> int:
        """Rank of d_n restricted to the given (s,h)-line of slice n."""
        d = self.diffs.get(n)
        if d is None:
            return 0
        cols = [
            i
            for i, deg in enumerate(self.slice(n).degrees)
            if (deg.s, deg.h) == line
        ]
        colset = set(cols)
        rows: dict = {}
        for (i, j), c in d.entries.items():
            if j in colset:
                rows.setdefault(j, {})[i] = c
        return rank(rows.values())

    def cohomology(self) -> dict:
        """Degree -> dimension of cohomology, at interior degrees only."""
        out: dict = {}
        for n in self.interior():
            for line, idxs in self._line_blocks(n).items():
                dim = len(idxs)
                h = dim - self._rank_line(n, line) - self._rank_line(n - 1, line)
                if h:
                    out[Degree(n, line[0], line[1])] = h
        return dict(sorted(out.items()))

    def cohomology_at(self, degree: Degree) -> int:
        if not (self.lo < degree.coh < self.hi):
            raise WindowTooSmall(
                f"coh degree {degree.coh} is not interior to [{self.lo},{self.hi}]"
            )
        line = (degree.s, degree.h)
        dim = sum(1 for d in self.slice(degree.coh).degrees if (d.s, d.h) == line)
        return dim - self._rank_line(degree.coh, line) - self._rank_line(degree.coh - 1, line)

    def dims_table(self) -> dict:
        out: dict = {}
        for n, s in sorted(self.slices.items()):
            for d in s.degrees:
                out[d] = out.get(d, 0) + 1
        return out

    def is_interior_acyclic(self, allow_unit: bool = False) -> bool:
        """No interior cohomology, except possibly one dimension at Degree 0."""
        coh = self.cohomology()
        if allow_unit:
            coh.pop(Degree(0, 0, 0), None)
        return not coh

    def euler_violations(self) -> list:
        """Lines vanishing at both window ends where chi(C) != chi(H).

        Only lines whose boundary slices are empty are checked; for those the
        window contains the whole line, so the Euler characteristics of the
        complex and its cohomology must agree.
        """
        lines = set()
        for n in range(self.lo, self.hi + 1):
            lines.update(self._line_blocks(n))
        bad = []
        for line in sorted(lines):
            if any((d.s, d.h) == line for d in self.slice(self.lo).degrees):
                continue
            if any((d.s, d.h) == line for d in self.slice(self.hi).degrees):
                continue
            chi_c = 0
            for n in range(self.lo, self.hi + 1):
                dim = sum(1 for d in self.slice(n).degrees if (d.s, d.h) == line)
                chi_c += (-1) ** n * dim
            chi_h = 0
            for n in self.interior():
                dim = sum(1 for d in self.slice(n).degrees if (d.s, d.h) == line)
                h = dim - self._rank_line(n, line) - self._rank_line(n - 1, line)
                chi_h += (-1) ** n * h
            if chi_c != chi_h:
                bad.append((line, chi_c, chi_h))
        return bad

    def __repr__(self):
        dims = {n: self.slice(n).dim for n in range(self.lo, self.hi + 1)}
        return f"ComplexWindow[{self.lo},{self.hi}] dims {dims}"


def verify_differential(c: ComplexWindow) -> bool:
    return c.verify_differential()


def cohomology(c: ComplexWindow) -> dict:
    return c.cohomology()


# -- chain maps and cones ------------------------------------------------------


def cone(maps: dict, source: ComplexWindow, target: ComplexWindow) -> ComplexWindow:
    """Mapping cone of a degree-0 chain map f: source -> target.

    Cone slice n = target_n (+) source_(n+1); d(y, x) = (dy + f(x), -dx).
    ``maps``: coh n -> GradedMap source_n -> target_n (missing = zero).
    """
    lo = min(source.lo - 1, target.lo)
    hi = max(source.hi - 1, target.hi)
    slices = {}
    for n in range(lo, hi + 1):
        basis = [(f"t.{name}", deg) for name, deg in target.slice(n)]
        basis += [
            (f"s.{name}", Degree(n, deg.s, deg.h))
            for name, deg in source.slice(n + 1)
        ]
        slices[n] = GradedSpace(basis)
    diffs = {}
    for n in range(lo, hi):
        src, tgt = slices[n], slices[n + 1]
        if not src.dim or not tgt.dim:
            continue
        entries = {}
        tn = target.slice(n).dim
        tn1 = target.slice(n + 1).dim
        for (i, j), c in target.diff(n).entries.items():
            entries[(i, j)] = c
        f = maps.get(n + 1)
        if f is not None:
            for (i, j), c in f.entries.items():
                entries[(i, j + tn)] = entries.get((i, j + tn), Fraction(0)) + c
        for (i, j), c in source.diff(n + 1).entries.items():
            entries[(i + tn1, j + tn)] = -c
        diffs[n] = GradedMap(src, tgt, COH1, entries)
    return ComplexWindow(lo, hi, slices, diffs)


# -- bicomplexes ---------------------------------------------------------------


class BicomplexWindow:
    """A finite rectangle of spaces with commuting horizontal/vertical maps.

    ``spaces[(p, q)]`` is a GradedSpace whose basis degrees already carry the
    total cohomological degree p+q; ``horiz[(p, q)]`` maps (p,q) -> (p+1,q)
    and ``vert[(p, q)]`` maps (p,q) -> (p,q+1), both of degree (+1,0,0).
    """

    def __init__(self, spaces: dict, horiz: dict, vert: dict):
        self.spaces = {k: v for k, v in spaces.items() if v.dim}
        self.horiz = {k: v for k, v in horiz.items() if v is not None and not v.is_zero()}
        self.vert = {k: v for k, v in vert.items() if v is not None and not v.is_zero()}

    def space(self, p, q) -> GradedSpace:
        return self.spaces.get((p, q), _EMPTY)


def totalize(b: BicomplexWindow, sign: bool = True) -> ComplexWindow:
    """Direct-sum totalization with d = d_h + (-1)^p d_v on column p.

    With ``sign`` the input squares must commute; without it they must
    anticommute.  The assembled differential is verified to square to zero
    (SignIncoherence otherwise).
    """
    if not b.spaces:
        raise ValueError("empty bicomplex")
    cells = sorted(b.spaces)
    lo = min(p + q for p, q in cells)
    hi = max(p + q for p, q in cells)
    offsets: dict = {}
    slices: dict = {}
    for n in range(lo, hi + 1):
        basis = []
        for (p, q) in cells:
            if p + q == n:
                offsets[(p, q)] = len(basis)
                basis.extend(
                    (f"{name}@{p},{q}", deg) for name, deg in b.spaces[(p, q)]
                )
        slices[n] = GradedSpace(basis)
    diffs: dict = {}
    for n in range(lo, hi):
        entries: dict = {}
        for (p, q) in cells:
            if p + q != n:
                continue
            src_off = offsets[(p, q)]
            f = b.horiz.get((p, q))
            if f is not None and (p + 1, q) in offsets and b.space(p + 1, q).dim:
                tgt_off = offsets[(p + 1, q)]
                for (i, j), c in f.entries.items():
                    entries[(tgt_off + i, src_off + j)] = c
            g = b.vert.get((p, q))
            if g is not None and (p, q + 1) in offsets and b.space(p, q + 1).dim:
                tgt_off = offsets[(p, q + 1)]
                s = (-1) ** p if sign else 1
                for (i, j), c in g.entries.items():
                    key = (tgt_off + i, src_off + j)
                    entries[key] = entries.get(key, Fraction(0)) + s * c
        if entries:
            diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    out = ComplexWindow(lo, hi, slices, diffs)
    if not out.verify_differential():
        raise SignIncoherence("totalization differential does not square to zero")
    return out


# -- filtrations ---------------------------------------------------------------


class FiltrationData:
    """An increasing family of per-degree spanning sets inside a complex.

    ``stages[p]`` maps coh degree n to a list of sparse vectors (coordinates
    in the slice basis).  Stage p must contain stage p-1.  For honest
    filtrations each stage is d-closed; staircase flags allow d(G_p) inside
    G_(p+1) instead (the shape used by contractibility arguments).
    """

    def __init__(self, complex: ComplexWindow, stages: dict, staircase: bool = False):
        self.complex = complex
        self.stage_indices = sorted(stages)
        self.stages = {p: {n: [dict(v) for v in vs] for n, vs in stages[p].items()} for p in stages}
        self.staircase = staircase

    def echelons(self, p) -> dict:
        out: dict = {}
        for n in range(self.complex.lo, self.complex.hi + 1):
            e = Echelon()
            for v in self.stages.get(p, {}).get(n, ()):
                e.add(v)
            out[n] = e
        return out

    def check_increasing(self) -> bool:
        es = None
        for p in self.stage_indices:
            nxt = self.echelons(p)
            if es is not None:
                for n, e in es.items():
                    for row in e.basis():
                        if not nxt[n].contains(row):
                            return False
            es = nxt
        return True

    def check_closed(self) -> list:
        """Stages (p, n) where d(G_p) escapes G_p (empty for subcomplexes)."""
        bad = []
        for p in self.stage_indices:
            es = self.echelons(p)
            for n in range(self.complex.lo, self.complex.hi):
                d = self.complex.diff(n)
                for v in self.stages.get(p, {}).get(n, ()):
                    if not es[n + 1].contains(d.apply(v)):
                        bad.append((p, n))
                        break
        return bad

    def check_staircase(self) -> list:
        """Stages (p, n) where d(G_p) escapes G_(p+1)."""
        bad = []
        for idx, p in enumerate(self.stage_indices):
            nxt = self.stage_indices[min(idx + 1, len(self.stage_indices) - 1)]
            es = self.echelons(nxt)
            for n in range(self.complex.lo, self.complex.hi):
                d = self.complex.diff(n)
                for v in self.stages.get(p, {}).get(n, ()):
                    if not es[n + 1].contains(d.apply(v)):
                        bad.append((p, n))
                        break
        return bad


def sub_complex(c: ComplexWindow, spans: dict) -> ComplexWindow:
    """The subcomplex spanned per degree by the given vectors.

    ``spans``: coh n -> list of sparse vectors in slice coordinates.  The
    span must be d-closed; the subcomplex basis is the echelonized span, and
    degrees must be homogeneous per vector.
    """
    echelons = {}
    slices = {}
    for n in range(c.lo, c.hi + 1):
        e = Echelon()
        for v in spans.get(n, ()):
            e.add(dict(v))
        echelons[n] = e
        basis = []
        for k, row in enumerate(e.basis()):
            degs = {c.slice(n).degrees[i] for i in row}
            if len({(d.s, d.h) for d in degs}) != 1:
                raise ValueError("sub_complex spans must be line-homogeneous")
            basis.append((f"v{n}.{k}", next(iter(degs))))
        slices[n] = GradedSpace(basis)
    diffs = {}
    for n in range(c.lo, c.hi):
        if not slices[n].dim or not slices[n + 1].dim:
            continue
        entries = {}
        row_of = {p: k for k, p in enumerate(echelons[n + 1]._order)}
        for j, row in enumerate(echelons[n].basis()):
            img = c.diff(n).apply(row)
            res, coords = echelons[n + 1].reduce_with_coords(img)
            if res:
                raise ValueError(f"span at degree {n} is not d-closed")
            for p, coeff in coords.items():
                if coeff:
                    entries[(row_of[p], j)] = coeff
        diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    return ComplexWindow(c.lo, c.hi, slices, diffs)


def quotient_complex(c: ComplexWindow, spans: dict) -> ComplexWindow:
    """The quotient of the window by the d-closed span (coordinate model).

    Quotient basis: slice coordinates away from the span's pivots; the
    induced differential reduces images modulo the span.
    """
    echelons = {}
    slices = {}
    keep: dict = {}
    for n in range(c.lo, c.hi + 1):
        e = Echelon()
        for v in spans.get(n, ()):
            e.add(dict(v))
        echelons[n] = e
        pivots = e.pivots()
        idxs = [i for i in range(c.slice(n).dim) if i not in pivots]
        keep[n] = {i: k for k, i in enumerate(idxs)}
        slices[n] = GradedSpace(
            (f"q{n}.{i}", c.slice(n).degrees[i]) for i in idxs
        )
    diffs = {}
    for n in range(c.lo, c.hi):
        if not slices[n].dim or not slices[n + 1].dim:
            continue
        entries = {}
        for i_src, j in keep[n].items():
            img = c.diff(n).apply({i_src: Fraction(1)})
            res = echelons[n + 1].reduce(img)
            for i_tgt, coeff in res.items():
                if i_tgt not in keep[n + 1]:
                    raise ValueError("span is not d-closed (residue hits a pivot)")
                entries[(keep[n + 1][i_tgt], j)] = coeff
        diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    return ComplexWindow(c.lo, c.hi, slices, diffs)


def staircase_contractibility(k: ComplexWindow, g: FiltrationData) -> bool:
    """Certify contractibility via the modified filtration trick.

    Requires d(G_i) <= G_(i+1) (NotAStaircase otherwise).  Builds the
    d-closed stages G~_i = G_i + d(G_i) and checks that every successive
    quotient (including the top quotient K/G~_top when proper) has vanishing
    interior cohomology.
    """
    if g.check_staircase():
        raise NotAStaircase("filtration does not satisfy d(G_i) <= G_(i+1)")
    c = g.complex
    modified = []
    for p in g.stage_indices:
        spans: dict = {n: [dict(v) for v in g.stages.get(p, {}).get(n, ())] for n in g.stages.get(p, {})}
        for n in range(c.lo, c.hi):
            for v in g.stages.get(p, {}).get(n, ()):
                img = c.diff(n).apply(v)
                if img:
                    spans.setdefault(n + 1, []).append(img)
        modified.append(spans)
    # successive quotients G~_i / G~_(i-1); the first quotient is G~_0 itself
    prev: dict = {}
    for spans in modified:
        stage = sub_complex(c, spans)
        inner = {}
        for n in range(c.lo, c.hi + 1):
            # express the previous stage inside this stage's echelon coordinates
            full = Echelon()
            for v in spans.get(n, ()):
                full.add(dict(v))
            row_of = {p: k for k, p in enumerate(full._order)}
            vecs = []
            for v in prev.get(n, ()):
                res, coords = full.reduce_with_coords(dict(v))
                if res:
                    return False  # not increasing
                vecs.append({row_of[p]: x for p, x in coords.items() if x})
            inner[n] = vecs
        q = quotient_complex(stage, inner)
        if not q.is_interior_acyclic():
            return False
        prev = spans
    top = quotient_complex(c, prev)
    return top.is_interior_acyclic()
