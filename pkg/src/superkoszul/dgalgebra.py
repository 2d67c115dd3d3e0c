"""Super-symmetric monomials and windowed dg-algebra assembly.

The free graded-commutative algebra on homogeneous generators has monomial
basis with unlimited exponents on even-total generators and exponents <= 1 on
odd-total ones (total degree = coh + s governs all signs).  This module
provides the monomial bookkeeping (canonical ordering, extraction and
insertion signs) used by the Chevalley-Eilenberg, Spencer, Koszul and de Rham
complexes, plus a generic way to slice a presented algebra with a derivation
into a ComplexWindow.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

from .algebra import Element, RewriteSystem
from .complexes import ComplexWindow, WindowTooSmall
from .degrees import COH1, Degree, GradedMap, GradedSpace, ZERO


# -- super-symmetric monomials over a list of (name, Degree) generators --------


class SymGenerators:
    def __init__(self, gens):
        gens = list(gens)
        self.names = tuple(n for n, _ in gens)
        self.degrees = tuple(d for _, d in gens)
        self.totals = tuple(d.total for d in self.degrees)

    @property
    def count(self):
        return len(self.names)

    def monomial_degree(self, mono: tuple) -> Degree:
        d = ZERO
        for i, e in enumerate(mono):
            d = d + self.degrees[i] * e
        return d

    def monomials(self, size: int):
        """All exponent tuples of the given total size (odd-total exps <= 1)."""
        out = []

        def rec(i, remaining, acc):
            if i == self.count:
                if remaining == 0:
                    out.append(tuple(acc))
                return
            cap = remaining if self.totals[i] % 2 == 0 else min(1, remaining)
            for e in range(cap + 1):
                acc.append(e)
                rec(i + 1, remaining - e, acc)
                acc.pop()

        rec(0, size, [])
        return out

    def positions(self, mono: tuple):
        """The factor list of a monomial in canonical (index) order."""
        out = []
        for i, e in enumerate(mono):
            out.extend([i] * e)
        return out

    def extract_sign(self, mono: tuple, pos: int) -> int:
        """Sign of moving the factor at canonical position ``pos`` to the front."""
        plist = self.positions(mono)
        t = self.totals[plist[pos]]
        if t % 2 == 0:
            return 1
        crossed = sum(1 for c in plist[:pos] if self.totals[c] % 2)
        return -1 if crossed % 2 else 1

    def insert_front_sign(self, i: int, mono: tuple):
        """Canonicalize gen_i * mono: returns (sign, new monomial) or None.

        None when an odd-total generator squares to zero against ``mono``.
        """
        if self.totals[i] % 2:
            if mono[i]:
                return None
            crossed = sum(
                e for j, e in enumerate(mono) if j < i and self.totals[j] % 2
            )
            sign = -1 if crossed % 2 else 1
        else:
            sign = 1
        new = list(mono)
        new[i] += 1
        return sign, tuple(new)

    def name_of(self, mono: tuple) -> str:
        bits = []
        for i, e in enumerate(mono):
            if e == 1:
                bits.append(self.names[i])
            elif e > 1:
                bits.append(f"{self.names[i]}^{e}")
        return "*".join(bits) if bits else "1"


# -- windowed dg-algebras -------------------------------------------------------


class Derivation:
    """A degree-(+1,0,0) super-derivation of a presented algebra.

    Determined by its values on generators; extended by the Leibniz rule with
    Koszul signs (the derivation is odd, so it picks up the sign of the
    prefix's total degree), with results kept in normal form.
    """

    def __init__(self, rs: RewriteSystem, images: dict):
        self.rs = rs
        self.pres = rs.pres
        self.images = {}
        for name, val in images.items():
            i = self.pres._index[name]
            img = self.pres.parse(val) if isinstance(val, str) else val
            expected = self.pres.generators[i].degree + COH1
            if img and img.degree() != expected:
                raise ValueError(
                    f"d({name}) must have degree {expected}, got {img.degree()}"
                )
            self.images[i] = img

    def of_word(self, word) -> Element:
        out = self.pres.zero()
        prefix_total = 0
        for pos, i in enumerate(word):
            img = self.images.get(i)
            if img is not None and img:
                sign = -1 if prefix_total % 2 else 1
                pre = Element(self.pres, {word[:pos]: Fraction(sign)})
                post = Element(self.pres, {word[pos + 1:]: Fraction(1)})
                out = out + pre * img * post
            prefix_total += self.pres.generators[i].degree.total
        return out

    def __call__(self, x: Element) -> Element:
        out = self.pres.zero()
        for w, c in x.terms.items():
            out = out + c * self.of_word(w)
        return self.rs.reduce(out)


def dg_window(
    rs: RewriteSystem,
    der: Derivation,
    words,
    complete_below: bool = True,
    complete_above: bool = True,
) -> ComplexWindow:
    """Assemble the complex window spanned by the given irreducible words.

    ``complete_below``/``complete_above`` assert that the enumeration is
    structurally complete in that direction (the complex vanishes beyond it),
    padding the window with an empty boundary slice; a differential escaping
    a claimed-complete region raises WindowTooSmall.  Without
    ``complete_above`` the top slice is a boundary and its differential is
    not represented.
    """
    pres = rs.pres
    by_coh: dict = {}
    index: dict = {}
    for w in words:
        d = pres.word_degree(w)
        by_coh.setdefault(d.coh, []).append((w, d))
    for n in by_coh:
        by_coh[n].sort()
    slices = {}
    for n, items in by_coh.items():
        names = []
        for k, (w, d) in enumerate(items):
            index[w] = (n, k)
            label = "*".join(pres.generators[i].name for i in w) or "1"
            names.append((f"{label}#{k}", d))
        slices[n] = GradedSpace(names)
    lo = min(by_coh) - 1 if complete_below else min(by_coh)
    hi = max(by_coh) + 1 if complete_above else max(by_coh)
    diffs = {}
    for n in sorted(by_coh):
        if n >= hi:
            continue  # top boundary: outgoing differential not represented
        entries: dict = {}
        for k, (w, _) in enumerate(by_coh[n]):
            img = der(Element(pres, {w: Fraction(1)}))
            for iw, c in img.terms.items():
                if iw not in index or index[iw][0] != n + 1:
                    raise WindowTooSmall(
                        f"d({'*'.join(pres.generators[i].name for i in w)}) leaves "
                        f"the word window at coh {n}"
                    )
                entries[(index[iw][1], k)] = c
        if entries:
            diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    return ComplexWindow(lo, hi, slices, diffs)


def words_with_labels(rs: RewriteSystem, predicate, maxlen: int):
    """Irreducible words whose label vector satisfies the predicate."""
    return [
        w
        for w in rs.irreducible_words(maxlen)
        if predicate(rs.pres.word_labels(w))
    ]
