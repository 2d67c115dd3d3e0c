"""Rees and coRees functors, the reduced cobar construction, twisted tensor
complexes, and the relative cobar construction with its Maurer-Cartan twist.

Coalgebras are finite windows with a split coaugmentation: basis vector 0 is
the group-like unit, the remaining basis spans the coaugmentation coideal.
Conilpotency (iterated reduced comultiplication vanishing) is checked up to
the window size rather than assumed.

Cobar conventions: a letter of the cobar complex is a shifted non-unit basis
vector of the coalgebra (cohomological degree raised by one); the
differential combines the coalgebra's internal differential with reduced
comultiplication splits.  The split sign is frozen to the value making every
assembled differential square to zero (checked at construction time).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .algebra import Element, Presentation, RewriteSystem
from .complexes import ComplexWindow, quotient_complex
from .degrees import COH1, Degree, GradedMap, GradedSpace, ZERO
from .linalg import Echelon


class ConilpotencyFailure(ValueError):
    """Iterated reduced comultiplication fails to vanish within the window."""


class CoactionNotMultiplicative(ValueError):
    """A coaction does not respect the algebra structure."""


class ConilpotentCoalgebra:
    """A finite window of a coaugmented conilpotent dg-coalgebra.

    ``comult[k]``: {(i,j): c} with Delta(x_k) = sum c * x_i (x) x_j;
    ``diff[k]``: {i: c} the internal differential (degree (+1,0,0)).
    Basis vector 0 is the coaugmentation unit.
    """

    def __init__(self, space: GradedSpace, comult: dict, diff: dict | None = None):
        self.space = space
        if space.degrees[0] != ZERO:
            raise ValueError("basis vector 0 must be the unit in degree 0")
        self.comult = {
            k: {ij: Fraction(c) for ij, c in v.items() if c} for k, v in comult.items()
        }
        self.diff = {
            k: {i: Fraction(c) for i, c in v.items() if c}
            for k, v in (diff or {}).items()
        }
        for k, v in self.comult.items():
            dk = space.degrees[k]
            for (i, j) in v:
                if space.degrees[i] + space.degrees[j] != dk:
                    raise ValueError("comultiplication is not degree-additive")
        for k, v in self.diff.items():
            for i in v:
                if space.degrees[i] != space.degrees[k] + COH1:
                    raise ValueError("internal differential must have degree (+1,0,0)")

    @property
    def dim(self):
        return self.space.dim

    def delta(self, k: int) -> dict:
        return self.comult.get(k, {})

    def reduced_delta(self, k: int) -> dict:
        """Delta-bar on the coideal: strip the x(x)1 and 1(x)x terms."""
        if k == 0:
            return {}
        out = dict(self.delta(k))
        for key in ((k, 0), (0, k)):
            out.pop(key, None)
        return out

    def check_counit(self) -> bool:
        for k in range(self.dim):
            left: dict = {}
            right: dict = {}
            for (i, j), c in self.delta(k).items():
                if i == 0:
                    left[j] = left.get(j, Fraction(0)) + c
                if j == 0:
                    right[i] = right.get(i, Fraction(0)) + c
            want = {k: Fraction(1)}
            if {a: b for a, b in left.items() if b} != want:
                return False
            if {a: b for a, b in right.items() if b} != want:
                return False
        return True

    def check_coassociative(self) -> bool:
        for k in range(self.dim):
            lhs: dict = {}
            rhs: dict = {}
            for (i, j), c in self.delta(k).items():
                for (a, b), c2 in self.delta(i).items():
                    key = (a, b, j)
                    lhs[key] = lhs.get(key, Fraction(0)) + c * c2
                for (a, b), c2 in self.delta(j).items():
                    key = (i, a, b)
                    rhs[key] = rhs.get(key, Fraction(0)) + c * c2
            if {k2: v for k2, v in lhs.items() if v} != {
                k2: v for k2, v in rhs.items() if v
            }:
                return False
        return True

    def check_differential_coderivation(self) -> bool:
        """Delta d = (d (x) 1 + 1 (x) d) Delta, with the Koszul sign on 1(x)d."""
        for k in range(self.dim):
            lhs: dict = {}
            for i, c in self.diff.get(k, {}).items():
                for (a, b), c2 in self.delta(i).items():
                    lhs[(a, b)] = lhs.get((a, b), Fraction(0)) + c * c2
            rhs: dict = {}
            for (i, j), c in self.delta(k).items():
                for a, c2 in self.diff.get(i, {}).items():
                    rhs[(a, j)] = rhs.get((a, j), Fraction(0)) + c * c2
                sgn = -1 if self.space.degrees[i].total % 2 else 1
                for b, c2 in self.diff.get(j, {}).items():
                    rhs[(i, b)] = rhs.get((i, b), Fraction(0)) + sgn * c * c2
            if {x: v for x, v in lhs.items() if v} != {x: v for x, v in rhs.items() if v}:
                return False
        return True

    def conilpotency_level(self, max_level: int | None = None) -> int:
        """Smallest N with Delta-bar^(N) = 0; ConilpotencyFailure beyond cap."""
        cap = max_level if max_level is not None else self.dim + 2
        level = 1
        current = {k: {(k,): Fraction(1)} for k in range(1, self.dim)}
        while any(current.values()):
            level += 1
            if level > cap:
                raise ConilpotencyFailure(
                    f"reduced comultiplication survives {cap} iterations"
                )
            nxt: dict = {}
            for k, words in current.items():
                acc: dict = {}
                for word, c in words.items():
                    for (a, b), c2 in self.reduced_delta(word[-1]).items():
                        nw = word[:-1] + (a, b)
                        acc[nw] = acc.get(nw, Fraction(0)) + c * c2
                nxt[k] = {w: v for w, v in acc.items() if v}
            current = nxt
        return level


# -- concrete coalgebras --------------------------------------------------------


def coalgebra_keps() -> ConilpotentCoalgebra:
    """k[eps] with eps of degree (-1,0,1): the filtration-side coalgebra."""
    space = GradedSpace([("1", ZERO), ("eps", Degree(-1, 0, 1))])
    comult = {
        0: {(0, 0): Fraction(1)},
        1: {(0, 1): Fraction(1), (1, 0): Fraction(1)},
    }
    return ConilpotentCoalgebra(space, comult)


def omega_line_coalgebra(max_form: int) -> ConilpotentCoalgebra:
    """The de Rham Hopf coalgebra of the odd affine line, k[eps, deps].

    Basis eps^a deps^b (a <= 1, b <= max_form) with |eps| = (0,1,0) and
    |deps| = (1,1,0); the comultiplication is multiplicative on primitives
    and the internal differential is de Rham (eps -> deps).  The form
    filtration (h-grading) belongs to the filtered picture, where the de Rham
    differential becomes a coaction; here it would not be h-homogeneous, so
    the unfiltered coalgebra carries h-degree 0.
    """
    deg_e = Degree(0, 1, 0)
    deg_de = Degree(1, 1, 0)
    basis = []
    index = {}
    # eps*deps^max_form is omitted so the window is closed under d
    for total in range(0, max_form + 2):
        for a in (0, 1):
            for b in range(max_form + 1 - a):
                if a + b == total:
                    name = ("eps" if a else "") + (
                        f"deps^{b}" if b > 1 else ("deps" if b == 1 else "")
                    )
                    index[(a, b)] = len(basis)
                    basis.append((name or "1", deg_e * a + deg_de * b))
    space = GradedSpace(basis)
    comult = {}
    for (a, b), k in index.items():
        out: dict = {}
        for i in range(b + 1):
            coeff = Fraction(comb(b, i))
            if a == 0:
                out[(index[(0, i)], index[(0, b - i)])] = coeff
            else:
                # deps is even-total, so no Koszul signs appear in either term
                out[(index[(1, i)], index[(0, b - i)])] = coeff
                key = (index[(0, i)], index[(1, b - i)])
                out[key] = out.get(key, Fraction(0)) + coeff
        comult[k] = out
    diff = {}
    for (a, b), k in index.items():
        if a == 1:
            diff[k] = {index[(0, b + 1)]: Fraction(1)}
    return ConilpotentCoalgebra(space, comult, diff)


def chain_coalgebra(g, n_max: int) -> ConilpotentCoalgebra:
    """C_.(g) with the unshuffle comultiplication and the bracket differential."""
    from .ce import _chain_lie_entries, _suspended

    sym = _suspended(g)
    monos = []
    index = {}
    for n in range(n_max + 1):
        for m in sym.monomials(n):
            index[m] = len(monos)
            monos.append(m)
    space = GradedSpace(
        (sym.name_of(m) if sum(m) else "1", sym.monomial_degree(m)) for m in monos
    )
    comult = {}
    for m in monos:
        plist = sym.positions(m)
        n = len(plist)
        out: dict = {}
        for mask in range(1 << n):
            left = [plist[i] for i in range(n) if mask & (1 << i)]
            right = [plist[i] for i in range(n) if not mask & (1 << i)]
            # Koszul sign of the unshuffle: right-factor entries crossing
            # later left-factor entries
            sign = 1
            for i in range(n):
                if mask & (1 << i):
                    continue
                ti = sym.totals[plist[i]]
                if ti % 2 == 0:
                    continue
                crossing = sum(
                    1
                    for j in range(i + 1, n)
                    if mask & (1 << j) and sym.totals[plist[j]] % 2
                )
                if crossing % 2:
                    sign = -sign
            lm = [0] * sym.count
            for i in left:
                lm[i] += 1
            rm = [0] * sym.count
            for i in right:
                rm[i] += 1
            key = (index[tuple(lm)], index[tuple(rm)])
            out[key] = out.get(key, Fraction(0)) + sign
        comult[index[m]] = {k: v for k, v in out.items() if v}
    diff = {}
    for m in monos:
        entries = _chain_lie_entries(g, sym, m)
        if entries:
            diff[index[m]] = {index[t]: c for t, c in entries.items()}
    return ConilpotentCoalgebra(space, comult, diff)


# -- reduced cobar ---------------------------------------------------------------

# Sign shapes for the cobar split and the twisting insertion, frozen by the
# squares-to-zero checks run at construction time (see module docstring).
def _COBAR_SPLIT_SIGN(total_left):
    return -1 if total_left % 2 else 1


def _TWIST_SIGN(total_left, total_right):
    return -1 if (total_left + total_right) % 2 else 1


class CobarComplex:
    """The reduced cobar construction of a conilpotent coalgebra, windowed.

    Words are tuples of non-unit coalgebra basis indices (letters); the
    grading shifts every letter's cohomological degree up by one.
    Multiplication is concatenation.
    """

    def __init__(self, coalgebra: ConilpotentCoalgebra, max_len: int, keep=None):
        self.coalgebra = coalgebra
        self.max_len = max_len
        self.keep = keep or (lambda deg, length: True)
        coalgebra.conilpotency_level()
        space = coalgebra.space
        self.letter_degree = {
            i: space.degrees[i] + COH1 for i in range(1, space.dim)
        }
        words: list = [()]
        layer: list = [()]
        for _ in range(max_len):
            nxt = []
            for w in layer:
                base = self.word_degree(w)
                for i in range(1, space.dim):
                    d = base + self.letter_degree[i]
                    if self.keep(d, len(w) + 1):
                        nxt.append(w + (i,))
            words.extend(nxt)
            layer = nxt
        self.words = words
        self.index = {w: k for k, w in enumerate(words)}

    def word_degree(self, w) -> Degree:
        d = ZERO
        for i in w:
            d = d + self.letter_degree[i]
        return d

    def word_name(self, w) -> str:
        if not w:
            return "[]"
        return "[" + "|".join(self.coalgebra.space.names[i] for i in w) + "]"

    def d_word(self, w) -> dict:
        """Differential of a word: {word: coefficient}; may leave the window."""
        C = self.coalgebra
        out: dict = {}

        def add(word, c):
            if c:
                out[word] = out.get(word, Fraction(0)) + c
                if not out[word]:
                    del out[word]

        for pos, letter in enumerate(w):
            prefix_total = sum(self.letter_degree[i].total for i in w[:pos])
            psign = -1 if prefix_total % 2 else 1
            for tgt, c in C.diff.get(letter, {}).items():
                add(w[:pos] + (tgt,) + w[pos + 1:], psign * c)
            for (a, b), c in C.reduced_delta(letter).items():
                ssign = _COBAR_SPLIT_SIGN(self.letter_degree[a].total)
                add(w[:pos] + (a, b) + w[pos + 1:], psign * ssign * c)
        return out

    def window(self, complete_above: bool = False) -> ComplexWindow:
        by_coh: dict = {}
        for w in self.words:
            by_coh.setdefault(self.word_degree(w).coh, []).append(w)
        slices = {}
        pos = {}
        for n, ws in by_coh.items():
            ws.sort()
            basis = []
            for k, w in enumerate(ws):
                pos[w] = (n, k)
                basis.append((f"{self.word_name(w)}#{k}", self.word_degree(w)))
            slices[n] = GradedSpace(basis)
        lo = min(by_coh) - 1
        hi = max(by_coh) + (1 if complete_above else 0)
        diffs: dict = {}
        for n, ws in sorted(by_coh.items()):
            if n >= hi:
                continue
            entries: dict = {}
            for k, w in enumerate(ws):
                for tw, c in self.d_word(w).items():
                    if tw not in pos:
                        continue  # escapes the length/degree caps: boundary loss
                    entries[(pos[tw][1], k)] = c
            if entries:
                diffs[n] = GradedMap(
                    slices[n], slices.get(n + 1, GradedSpace([])), COH1, entries
                )
        out = ComplexWindow(lo, hi, slices, diffs)
        return out

    def verify_d_squared(self, sample_cap: int = 2000) -> bool:
        """d^2 = 0 termwise on every window word (ignoring escaped terms).

        Words whose first differential already escapes the window are skipped,
        so the check is exact on the sub-window closed under d.
        """
        count = 0
        for w in self.words:
            img = self.d_word(w)
            if any(t not in self.index for t in img):
                continue
            acc: dict = {}
            for t, c in img.items():
                for t2, c2 in self.d_word(t).items():
                    acc[t2] = acc.get(t2, Fraction(0)) + c * c2
            if any(v for t2, v in acc.items() if t2 in self.index):
                return False
            count += 1
            if count >= sample_cap:
                break
        return True


def reduced_cobar(coalgebra: ConilpotentCoalgebra, max_len: int, keep=None) -> CobarComplex:
    cob = CobarComplex(coalgebra, max_len, keep)
    if not cob.verify_d_squared():
        raise ValueError("cobar differential does not square to zero")
    return cob


def twisted_tensor(
    coalgebra: ConilpotentCoalgebra,
    cob: CobarComplex,
    complete_above: bool = True,
) -> ComplexWindow:
    """The complex C (x) Cob(C) with the twisting differential.

    d(c (x) w) = d_C(c) (x) w  +/-  c (x) d_A(w)  +  twist, where the twist
    comultiplies c and shifts the right Sweedler leg in as a new first letter.
    Honest windows require caps along gradings the differential conserves
    (the ``keep`` predicate of the cobar input); with such caps every line in
    the window is complete and ``complete_above`` may be asserted.
    """
    C = coalgebra
    basis: dict = {}
    for k in range(C.dim):
        for w in cob.words:
            deg = C.space.degrees[k] + cob.word_degree(w)
            if cob.keep(deg, len(w)):
                basis[(k, w)] = deg
    by_coh: dict = {}
    for key, deg in basis.items():
        by_coh.setdefault(deg.coh, []).append(key)
    slices = {}
    pos = {}
    for n, keys in by_coh.items():
        keys.sort()
        bs = []
        for k2, key in enumerate(keys):
            pos[key] = (n, k2)
            c, w = key
            bs.append((f"{C.space.names[c]}(x){cob.word_name(w)}#{k2}", basis[key]))
        slices[n] = GradedSpace(bs)
    lo = min(by_coh) - 1
    hi = max(by_coh) + (1 if complete_above else 0)
    diffs: dict = {}
    for n, keys in sorted(by_coh.items()):
        if n >= hi:
            continue
        entries: dict = {}
        for k2, (c, w) in enumerate(keys):
            img: dict = {}

            def add(key, coeff):
                if coeff:
                    img[key] = img.get(key, Fraction(0)) + coeff

            for t, coeff in C.diff.get(c, {}).items():
                add((t, w), coeff)
            csign = -1 if C.space.degrees[c].total % 2 else 1
            for tw, coeff in cob.d_word(w).items():
                add((c, tw), csign * coeff)
            for (a, b), coeff in C.delta(c).items():
                if b == 0:
                    continue
                tsign = _TWIST_SIGN(
                    C.space.degrees[a].total, C.space.degrees[b].total
                )
                add((a, (b,) + w), tsign * coeff)
            for key, coeff in img.items():
                if key not in pos:
                    from .complexes import WindowTooSmall

                    raise WindowTooSmall(
                        f"twisted differential leaves the window at coh {n}: "
                        "choose caps along gradings the differential conserves"
                    )
                entries[(pos[key][1], k2)] = coeff
        if entries:
            diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    return ComplexWindow(lo, hi, slices, diffs)


# -- filtered complexes: Rees and coRees ----------------------------------------


class FilteredComplex:
    """A complex window with an increasing exhaustive filtration.

    ``stages[p]``: coh degree -> list of line-homogeneous sparse vectors
    spanning F_p; stages below min(stages) are zero, above max(stages) equal
    the top stage (which must span the whole window).
    """

    def __init__(self, window: ComplexWindow, stages: dict):
        self.window = window
        self.stage_indices = sorted(stages)
        self.stages = {
            p: {n: [dict(v) for v in vs] for n, vs in spans.items()}
            for p, spans in stages.items()
        }
        top = self.echelons(self.stage_indices[-1])
        for n in range(window.lo, window.hi + 1):
            if top[n].dim != window.slice(n).dim:
                raise ValueError("top filtration stage must span the window")
        for p in self.stage_indices:
            es = self.echelons(p)
            for n in range(window.lo, window.hi):
                for v in self.stages[p].get(n, ()):
                    if not es[n + 1].contains(window.diff(n).apply(v)):
                        raise ValueError(f"stage {p} is not d-closed at degree {n}")

    def echelons(self, p) -> dict:
        out = {}
        spans = self.stages.get(p, {})
        for n in range(self.window.lo, self.window.hi + 1):
            e = Echelon()
            for v in spans.get(n, ()):
                e.add(dict(v))
            out[n] = e
        return out

    def stage_clamped(self, p):
        if p < self.stage_indices[0]:
            return None
        return min(p, self.stage_indices[-1])


class ReesComplex:
    def __init__(self, window: ComplexWindow, h_maps: dict, stage_range: tuple):
        self.window = window
        self.h_maps = h_maps  # h-degree p -> GradedMap summand_p -> summand_(p+1)
        self.stage_range = stage_range

    def h_injective(self) -> bool:
        from .linalg import rank

        for p, m in self.h_maps.items():
            rows: dict = {}
            for (i, j), c in m.entries.items():
                rows.setdefault(j, {})[i] = c
            if rank(rows.values()) != m.source.dim:
                return False
        return True


def rees(fc: FilteredComplex, h_hi: int | None = None) -> ReesComplex:
    """Rees(V, F) = (+)_p F_p V with multiplication by h = the inclusions.

    Summand p carries h-degree p; ``h_hi`` extends the window above the top
    declared stage (where F_p = V).
    """
    pmin = fc.stage_indices[0]
    pmax = fc.stage_indices[-1] if h_hi is None else h_hi
    win = fc.window
    summands = {}
    for p in range(pmin, pmax + 1):
        summands[p] = fc.echelons(min(p, fc.stage_indices[-1]))
    slices = {}
    offsets = {}
    for n in range(win.lo, win.hi + 1):
        basis = []
        for p in range(pmin, pmax + 1):
            offsets[(p, n)] = len(basis)
            for k, row in enumerate(summands[p][n].basis()):
                lines = {win.slice(n).degrees[i] for i in row}
                if len(lines) != 1:
                    raise ValueError("stage vectors must be line-homogeneous")
                deg = lines.pop() + Degree(0, 0, p)
                basis.append((f"h^{p}|{n}.{k}", deg))
        slices[n] = GradedSpace(basis)
    diffs = {}
    for n in range(win.lo, win.hi):
        entries: dict = {}
        for p in range(pmin, pmax + 1):
            ech_next = summands[p][n + 1]
            row_of = {piv: k for k, piv in enumerate(ech_next._order)}
            for j, row in enumerate(summands[p][n].basis()):
                img = win.diff(n).apply(row)
                res, coords = ech_next.reduce_with_coords(img)
                if res:
                    raise ValueError("stage not d-closed")
                for piv, c in coords.items():
                    if c:
                        entries[
                            (offsets[(p, n + 1)] + row_of[piv], offsets[(p, n)] + j)
                        ] = c
        if entries:
            diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    window = ComplexWindow(win.lo, win.hi, slices, diffs)
    h_maps = {}
    for p in range(pmin, pmax):
        entries = {}
        src_basis = []
        tgt_basis = []
        for n in range(win.lo, win.hi + 1):
            ech_next = summands[p + 1][n]
            row_of = {piv: k for k, piv in enumerate(ech_next._order)}
            src_off = len(src_basis)
            tgt_off = len(tgt_basis)
            for k, row in enumerate(summands[p][n].basis()):
                lines = {win.slice(n).degrees[i] for i in row}
                src_basis.append((f"h^{p}|{n}.{k}", lines.pop() + Degree(0, 0, p)))
            for k, row in enumerate(ech_next.basis()):
                lines = {win.slice(n).degrees[i] for i in row}
                tgt_basis.append((f"h^{p + 1}|{n}.{k}", lines.pop() + Degree(0, 0, p + 1)))
            for j, row in enumerate(summands[p][n].basis()):
                res, coords = ech_next.reduce_with_coords(dict(row))
                if res:
                    raise ValueError("filtration is not increasing")
                for piv, c in coords.items():
                    if c:
                        entries[(tgt_off + row_of[piv], src_off + j)] = c
        h_maps[p] = GradedMap(
            GradedSpace(src_basis), GradedSpace(tgt_basis), Degree(0, 0, 1), entries
        )
    return ReesComplex(window, h_maps, (pmin, pmax))


def gr_complex(fc: FilteredComplex, p: int) -> ComplexWindow:
    """The associated-graded piece F_p / F_(p-1) (original degrees)."""
    from .complexes import sub_complex

    spans = {n: fc.stages.get(p, {}).get(n, []) for n in range(fc.window.lo, fc.window.hi + 1)}
    stage = sub_complex(fc.window, spans)
    prev_idx = p - 1
    if prev_idx < fc.stage_indices[0]:
        return stage
    inner: dict = {}
    for n in range(fc.window.lo, fc.window.hi + 1):
        full = Echelon()
        for v in spans.get(n, ()):
            full.add(dict(v))
        row_of = {piv: k for k, piv in enumerate(full._order)}
        vecs = []
        for v in fc.stages.get(prev_idx, {}).get(n, ()):
            res, coords = full.reduce_with_coords(dict(v))
            if res:
                raise ValueError("filtration is not increasing")
            vecs.append({row_of[piv]: c for piv, c in coords.items() if c})
        inner[n] = vecs
    return quotient_complex(stage, inner)


class CoreesComplex:
    def __init__(self, window: ComplexWindow, projections: dict, quotient_dims: dict):
        self.window = window
        self.projections = projections  # i -> GradedMap quotient_i -> quotient_(i+1)
        self.quotient_dims = quotient_dims

    def coaction_finite(self) -> bool:
        """Every class dies under enough projection steps (cocompleteness)."""
        idxs = sorted(self.projections)
        if not idxs:
            return True
        for start in idxs:
            m = None
            src = self.projections[start].source
            current = GradedMap.identity(src)
            for i in range(start, idxs[-1] + 1):
                if i in self.projections:
                    current = self.projections[i].compose(current)
            if not current.is_zero():
                return False
        return True


def corees(fc: FilteredComplex) -> CoreesComplex:
    """coRees(V, F) = (+)_i V / F_i V, with the quotient V/F_i in h-degree i."""
    win = fc.window
    pmin, pmax = fc.stage_indices[0], fc.stage_indices[-1]
    quotients = {}
    for i in range(pmin, pmax + 1):
        spans = {n: fc.stages.get(i, {}).get(n, []) for n in range(win.lo, win.hi + 1)}
        q = quotient_complex(win, spans)
        quotients[i] = q
    slices = {}
    offsets = {}
    for n in range(win.lo, win.hi + 1):
        basis = []
        for i in range(pmin, pmax + 1):
            offsets[(i, n)] = len(basis)
            for name, deg in quotients[i].slice(n):
                basis.append((f"h^{i}|{name}", deg + Degree(0, 0, i)))
        slices[n] = GradedSpace(basis)
    diffs = {}
    for n in range(win.lo, win.hi):
        entries: dict = {}
        for i in range(pmin, pmax + 1):
            d = quotients[i].diffs.get(n)
            if d is None:
                continue
            for (r, c), v in d.entries.items():
                entries[(offsets[(i, n + 1)] + r, offsets[(i, n)] + c)] = v
        if entries:
            diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    window = ComplexWindow(win.lo, win.hi, slices, diffs)
    # projections V/F_i -> V/F_(i+1): identity on surviving coordinates
    projections = {}
    for i in range(pmin, pmax):
        entries = {}
        src_sl = []
        tgt_sl = []
        for n in range(win.lo, win.hi + 1):
            qi, qi1 = quotients[i], quotients[i + 1]
            src_off = len(src_sl)
            tgt_off = len(tgt_sl)
            src_sl.extend((f"{nm}@{n}", dg + Degree(0, 0, i)) for nm, dg in qi.slice(n))
            tgt_sl.extend(
                (f"{nm}@{n}", dg + Degree(0, 0, i + 1)) for nm, dg in qi1.slice(n)
            )
            # quotient bases are coordinate models: names q{n}.{orig index}
            tgt_index = {nm: k for k, (nm, _) in enumerate(qi1.slice(n))}
            spans_i1 = {
                m: fc.stages.get(i + 1, {}).get(m, [])
                for m in range(win.lo, win.hi + 1)
            }
            ech = Echelon()
            for v in spans_i1.get(n, ()):
                ech.add(dict(v))
            keep1 = {nm: k for k, (nm, _) in enumerate(qi1.slice(n))}
            for j, (nm, dg) in enumerate(qi.slice(n)):
                orig = int(nm.split(".")[-1])
                res = ech.reduce({orig: Fraction(1)})
                for coord, c in res.items():
                    key = f"q{n}.{coord}"
                    if key in keep1:
                        entries[(tgt_off + keep1[key], src_off + j)] = c
        projections[i] = GradedMap(
            GradedSpace(src_sl), GradedSpace(tgt_sl), Degree(0, 0, 1), entries
        )
    qdims = {
        i: {n: quotients[i].slice(n).dim for n in range(win.lo, win.hi + 1)}
        for i in quotients
    }
    return CoreesComplex(window, projections, qdims)
