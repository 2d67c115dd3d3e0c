"""Super differential operators and de Rham algebras on affine superspaces.

Coordinates are even (optionally invertible) or odd; the operator algebra is
presented by the coordinates and one partial per coordinate, with the Koszul
commutation rules and the order filtration (partials have weight one).  Every
generator carries one conserved counting label per coordinate direction
(coordinate +1, partial -1), which is what makes finite windows of the
Spencer, de Rham and Koszul complexes line-complete.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import Element, Generator, Presentation
from .complexes import ComplexWindow, FiltrationData, WindowTooSmall
from .degrees import COH1, Degree, GradedMap, GradedSpace
from .dgalgebra import SymGenerators
from .liealg import LieSuperalgebra
from .linalg import rank


class SuperSpace:
    """An affine coordinate superspace: even and odd coordinate directions."""

    def __init__(self, even=(), odd=()):
        """``even``: (name, invertible); ``odd``: (name, s_degree odd)."""
        self.even = [e if isinstance(e, tuple) else (e, False) for e in even]
        self.odd = [o if isinstance(o, tuple) else (o, 1) for o in odd]
        names = [n for n, _ in self.even] + [n for n, _ in self.odd]
        if len(set(names)) != len(names):
            raise ValueError("coordinate names must be distinct")
        for _, s in self.odd:
            if s % 2 == 0:
                raise ValueError("odd coordinates must have odd s-degree")

    @property
    def coordinates(self):
        return [n for n, _ in self.even] + [n for n, _ in self.odd]

    def coordinate_degrees(self):
        return [Degree(0, 0, 0)] * len(self.even) + [
            Degree(0, s, 0) for _, s in self.odd
        ]


def _partial_name(coord: str) -> str:
    return "d" + coord


class DiffOpAlgebra:
    """Differential operators on a superspace: presentation plus bookkeeping."""

    def __init__(self, space: SuperSpace):
        self.space = space
        ncoords = len(space.coordinates)
        coord_degs = space.coordinate_degrees()
        gens = []
        for k, name in enumerate(space.coordinates):
            labels = tuple(1 if i == k else 0 for i in range(ncoords))
            gens.append(Generator(name, coord_degs[k], weight=0, labels=labels))
        for k, name in enumerate(space.coordinates):
            labels = tuple(-1 if i == k else 0 for i in range(ncoords))
            gens.append(
                Generator(_partial_name(name), -coord_degs[k], weight=1, labels=labels)
            )
        pres0 = Presentation(gens)  # for degree lookups while building relations

        def deg(name):
            return pres0.generators[pres0._index[name]].degree

        rels = []
        names = space.coordinates
        partials = [_partial_name(n) for n in names]
        # coordinates and partials super-commute among themselves
        for family in (names, partials):
            for b in range(len(family)):
                for a in range(b + 1):
                    x, y = family[a], family[b]
                    ta, tb = deg(x).total, deg(y).total
                    if a == b:
                        if ta % 2:
                            rels.append(f"{x}*{x}")
                        continue
                    sign = "+" if (ta % 2) and (tb % 2) else "-"
                    rels.append(f"{y}*{x}{sign}{x}*{y}")
        # [d_a, q_b] = delta(a,b)
        for a, pa in enumerate(partials):
            for b, qb in enumerate(names):
                ta, tb = deg(pa).total, deg(qb).total
                sign = "+" if (ta % 2) and (tb % 2) else "-"
                unit = "-1" if a == b else ""
                rels.append(f"{pa}*{qb}{sign}{qb}*{pa}{unit}")
        invertible = [n for n, inv in space.even if inv]
        self.presentation = Presentation(gens, rels, invertible=invertible)
        self.coordinate_names = names
        self.partial_names = partials

    def completed(self, bound: int):
        return self.presentation.completed(bound)

    def parse(self, text: str) -> Element:
        return self.presentation.parse(text)

    def coordinate_subalgebra(self) -> Presentation:
        """Functions on the superspace: the coordinates alone."""
        pres = self.presentation
        keep = [
            g
            for g in pres.generators
            if not g.name.startswith("d") or g.name in self.coordinate_names
        ]
        keep_names = {g.name for g in keep}
        rels = []
        for r in pres.relations:
            names_in = {
                pres.generators[i].name for w in r.terms for i in w
            }
            if names_in <= keep_names:
                rels.append(repr(r))
        return Presentation(keep, rels)


def weyl_algebra(space: SuperSpace) -> DiffOpAlgebra:
    return DiffOpAlgebra(space)


# -- the Spencer complex --------------------------------------------------------


def _frame_sym(d: DiffOpAlgebra) -> SymGenerators:
    pres = d.presentation
    gens = []
    for name in d.partial_names:
        g = pres.generators[pres._index[name]]
        gens.append((f"xi_{name[1:]}", g.degree + Degree(-1, 0, 0)))
    return SymGenerators(gens)


def spencer_complex(d: DiffOpAlgebra, order_cap: int, line_box: int = 3, bound: int | None = None):
    """The filtered Spencer complex F_n Sp(D) = sum Sym^i(Der[1]) (x) F_(n-i) D.

    Returns (window, filtration) where the window holds F_(order_cap) over
    the box of counting labels with |component| <= line_box, and the
    filtration stages are F_0 .. F_(order_cap).  The differential contracts a
    frame factor into left multiplication; every stage is d-closed because
    the contraction raises operator order by exactly one as it removes one
    frame factor.
    """
    pres = d.presentation
    rs = d.completed(bound or (4 * order_cap + 6))
    sym = _frame_sym(d)
    from .ce import _chain_action_terms

    # enumerate D-words of order <= order_cap; the frame factors subtract up
    # to order_cap from each counting label, so the word pool must reach
    # line_box + order_cap above the box
    words = [
        w
        for w in rs.irreducible_words(2 * (line_box + 2 * order_cap) + 2)
        if pres.word_weight(w) <= order_cap
        and all(-line_box <= x <= line_box + order_cap for x in pres.word_labels(w))
    ]
    words_by_order: dict = {}
    for w in words:
        words_by_order.setdefault(pres.word_weight(w), []).append(w)

    basis: dict = {}
    for i in range(order_cap + 1):
        for mono in sym.monomials(i):
            for j in range(order_cap - i + 1):
                for w in words_by_order.get(j, ()):
                    labels = tuple(
                        a + b
                        for a, b in zip(
                            _mono_labels(d, mono), pres.word_labels(w)
                        )
                    )
                    if all(abs(x) <= line_box for x in labels):
                        deg = sym.monomial_degree(mono) + pres.word_degree(w)
                        basis[(mono, w)] = (deg, i + j)
    by_coh: dict = {}
    for key, (deg, stage) in basis.items():
        by_coh.setdefault(deg.coh, []).append(key)
    slices = {}
    pos = {}
    for n, keys in by_coh.items():
        keys.sort()
        bs = []
        for k, key in enumerate(keys):
            pos[key] = (n, k)
            mono, w = key
            wname = "*".join(pres.generators[i].name for i in w) or "1"
            bs.append((f"{sym.name_of(mono)}(x){wname}#{k}", basis[key][0]))
        slices[n] = GradedSpace(bs)
    lo = min(by_coh) - 1
    hi = max(by_coh) + 1
    diffs = {}
    frame_elems = [pres.gen(nm) for nm in d.partial_names]
    for n, keys in sorted(by_coh.items()):
        if n >= hi:
            continue
        entries: dict = {}
        for k, (mono, w) in enumerate(keys):
            welem = Element(pres, {w: Fraction(1)})
            for target, i, sign in _chain_action_terms(None, sym, None, mono):
                img = rs.reduce(frame_elems[i] * welem)
                for iw, c in img.terms.items():
                    key2 = (target, iw)
                    if key2 not in pos:
                        raise WindowTooSmall(
                            "Spencer differential escapes the label box"
                        )
                    entries[(pos[key2][1], k)] = (
                        entries.get((pos[key2][1], k), Fraction(0)) + sign * c
                    )
        entries = {k2: v for k2, v in entries.items() if v}
        if entries:
            diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    window = ComplexWindow(lo, hi, slices, diffs)
    stages = {}
    for p in range(order_cap + 1):
        spans: dict = {}
        for key, (deg, stage) in basis.items():
            if stage <= p:
                n, k = pos[key]
                spans.setdefault(n, []).append({k: Fraction(1)})
        stages[p] = spans
    filtration = FiltrationData(window, stages)
    return window, filtration


def _mono_labels(d: DiffOpAlgebra, mono: tuple) -> tuple:
    pres = d.presentation
    ncoords = len(d.coordinate_names)
    out = [0] * ncoords
    for i, e in enumerate(mono):
        g = pres.generators[pres._index[d.partial_names[i]]]
        for k, x in enumerate(g.labels):
            out[k] += x * e
    return tuple(out)


def spencer_function_dims(d: DiffOpAlgebra, line_box: int, bound: int = 24) -> dict:
    """Degree -> dimension table of the coordinate algebra inside the box."""
    pres = d.presentation
    rs = d.completed(bound)
    partial_idx = {pres._index[nm] for nm in d.partial_names}
    out: dict = {}
    for w in rs.irreducible_words(2 * line_box + 2):
        if any(i in partial_idx for i in w):
            continue
        if all(abs(x) <= line_box for x in pres.word_labels(w)):
            deg = pres.word_degree(w)
            out[deg] = out.get(deg, 0) + 1
    return out


# -- de Rham algebras -----------------------------------------------------------


class OmegaAlgebra:
    """Sym_A(Omega^1[-1]) with the de Rham derivation.

    ``presentation`` carries the decreasing form filtration as h-degrees
    (each dq sits in h-degree -1); the de Rham differential is not
    h-homogeneous (it is the coaction direction of the filtered picture), so
    the derivation and all cohomology windows live on ``flat``, the copy with
    the form grading dropped.
    """

    def __init__(self, space: SuperSpace):
        self.space = space
        coord_degs = space.coordinate_degrees()
        names = space.coordinates
        ncoords = len(names)

        def gens_with(dq_h: int):
            gens = []
            for k, name in enumerate(names):
                labels = tuple(1 if i == k else 0 for i in range(ncoords))
                gens.append(Generator(name, coord_degs[k], weight=0, labels=labels))
            for k, name in enumerate(names):
                labels = tuple(1 if i == k else 0 for i in range(ncoords))
                gens.append(
                    Generator(
                        "d" + name,
                        coord_degs[k] + Degree(1, 0, dq_h),
                        weight=0,
                        labels=labels,
                    )
                )
            return gens

        def relations(pres0):
            def deg(nm):
                return pres0.generators[pres0._index[nm]].degree

            family = names + ["d" + n for n in names]
            rels = []
            for b in range(len(family)):
                for a in range(b + 1):
                    x, y = family[a], family[b]
                    ta, tb = deg(x).total, deg(y).total
                    if a == b:
                        if ta % 2:
                            rels.append(f"{x}*{x}")
                        continue
                    sign = "+" if (ta % 2) and (tb % 2) else "-"
                    rels.append(f"{y}*{x}{sign}{x}*{y}")
            return rels

        invertible = [n for n, inv in space.even if inv]
        graded_gens = gens_with(-1)
        self.presentation = Presentation(
            graded_gens, relations(Presentation(graded_gens)), invertible=invertible
        )
        flat_gens = gens_with(0)
        self.flat = Presentation(
            flat_gens, relations(Presentation(flat_gens)), invertible=invertible
        )

    def de_rham_derivation(self, bound: int = 14):
        from .dgalgebra import Derivation

        rs = self.flat.completed(bound)
        images = {}
        for name in self.space.coordinates:
            images[name] = self.flat.gen("d" + name)
            images["d" + name] = self.flat.zero()
            inv = name + "^-1"
            if inv in self.flat._index:
                # d(q^-1) = -q^-2 dq
                images[inv] = -1 * self.flat.parse(f"{inv}*{inv}*d{name}")
        return Derivation(rs, images)

    def de_rham_window(self, length_cap: int = 6, bound: int = 14) -> ComplexWindow:
        """The de Rham complex over the label box |component| <= length_cap."""
        from .dgalgebra import dg_window

        rs = self.flat.completed(bound)
        der = self.de_rham_derivation(bound)
        words = [
            w
            for w in rs.irreducible_words(2 * length_cap + 2)
            if all(abs(x) <= length_cap for x in self.flat.word_labels(w))
        ]
        return dg_window(rs, der, words)


def omega_algebra(space: SuperSpace) -> OmegaAlgebra:
    return OmegaAlgebra(space)


# -- Morita check for odd affine space -------------------------------------------


def morita_check(q: int, bound: int = 14) -> bool:
    """dim D = 4^q, trivial center, and a simple module of dimension 2^q.

    The module is the exterior algebra on the odd coordinates, with each
    coordinate acting by multiplication and each partial by contraction; the
    check verifies the relations hold, the action map is onto the full matrix
    algebra, and the center is one-dimensional.
    """
    if q < 0 or q > 3:
        raise ValueError("q must be between 0 and 3")
    if q == 0:
        return True
    space = SuperSpace(odd=[(f"e{i}", 1) for i in range(1, q + 1)])
    d = weyl_algebra(space)
    pres = d.presentation
    rs = d.completed(bound)
    words = rs.irreducible_words(2 * q + 1)
    if len(words) != 4**q:
        return False
    # center: solve [z, gen] = 0 over the word basis; each generator and each
    # target word gives a linear constraint on the coefficients of z
    word_index = {w: i for i, w in enumerate(words)}
    constraint_rows = []
    for gname in pres._index:
        ge = pres.gen(gname)
        per_target: dict = {}
        for w in words:
            we = Element(pres, {w: Fraction(1)})
            sign = koszul_commutator_sign(pres, w, gname)
            comm = rs.reduce(we * ge - sign * (ge * we))
            for cw, c in comm.terms.items():
                per_target.setdefault(cw, {})[word_index[w]] = c
        constraint_rows.extend(per_target.values())
    center_dim = len(words) - rank(constraint_rows)
    if center_dim != 1:
        return False
    # explicit simple module on the exterior algebra of the coordinates
    ext = SymGenerators(
        (nm, Degree(0, s, 0)) for (nm, s) in space.odd
    )
    monos = []
    for k in range(q + 1):
        monos.extend(ext.monomials(k))
    mono_index = {m: i for i, m in enumerate(monos)}
    dim = len(monos)
    mats = {}
    for k, (nm, s) in enumerate(space.odd):
        mul = {}
        der = {}
        for m in monos:
            ins = ext.insert_front_sign(k, m)
            if ins is not None:
                sgn, target = ins
                mul[(mono_index[target], mono_index[m])] = Fraction(sgn)
            if m[k]:
                plist = ext.positions(m)
                a = plist.index(k)
                sgn = ext.extract_sign(m, a)
                target = list(m)
                target[k] -= 1
                der[(mono_index[tuple(target)], mono_index[m])] = Fraction(sgn)
        mats[nm] = mul
        mats["d" + nm] = der
    # verify the relations in the representation
    def apply_word(word) -> dict:
        out = {(i, i): Fraction(1) for i in range(dim)}
        for gi in reversed(word):
            mat = mats[pres.generators[gi].name]
            nxt: dict = {}
            for (r, m_), v in mat.items():
                for (m2, c), v2 in out.items():
                    if m_ == m2:
                        nxt[(r, c)] = nxt.get((r, c), Fraction(0)) + v * v2
            out = {k2: v for k2, v in nxt.items() if v}
        return out

    for rel in pres.relations:
        acc: dict = {}
        for w, c in rel.terms.items():
            for k2, v in apply_word(w).items():
                acc[k2] = acc.get(k2, Fraction(0)) + c * v
        if any(v for v in acc.values()):
            return False
    # surjectivity onto End: the images of all basis words span dim^2
    image_rows = []
    for w in words:
        image_rows.append({k2: v for k2, v in apply_word(w).items()})
    return rank(image_rows) == dim * dim


def koszul_commutator_sign(pres: Presentation, word, gname: str) -> int:
    from .degrees import koszul_sign

    dx = pres.word_degree(word)
    dg = pres.generators[pres._index[gname]].degree
    return koszul_sign(dx, dg)


# -- Koszul complex of a moment map ----------------------------------------------


def koszul_moment_complex(g: LieSuperalgebra, count_cap: int = 3) -> ComplexWindow:
    """K(g, O_g*) = Sym(g[1]) (x) Sym(g) with the contraction differential.

    Windowed by the conserved per-basis-element counts (eta_i and y_i share a
    counting label), so every line in the window is complete and the interior
    cohomology claim (k at degree 0) is exact.
    """
    from .dgalgebra import Derivation, dg_window

    n = g.dim
    gens = []
    for i, (nm, s) in enumerate(zip(g.names, g.sdegrees)):
        labels = tuple(1 if k == i else 0 for k in range(n))
        gens.append(Generator("eta_" + nm, Degree(-1, s, 0), labels=labels))
    for i, (nm, s) in enumerate(zip(g.names, g.sdegrees)):
        labels = tuple(1 if k == i else 0 for k in range(n))
        gens.append(Generator("y_" + nm, Degree(0, s, 0), labels=labels))
    pres0 = Presentation(gens)
    rels = []
    family = [g.name for g in gens]
    for b in range(len(family)):
        for a in range(b + 1):
            x, y = family[a], family[b]
            ta = pres0.generators[a].degree.total
            tb = pres0.generators[b].degree.total
            if a == b:
                if ta % 2:
                    rels.append(f"{x}*{x}")
                continue
            sign = "+" if (ta % 2) and (tb % 2) else "-"
            rels.append(f"{y}*{x}{sign}{x}*{y}")
    pres = Presentation(gens, rels)
    rs = pres.completed(4 * count_cap + 6)
    der = Derivation(
        rs,
        {
            **{"eta_" + nm: pres.gen("y_" + nm) for nm in g.names},
            **{"y_" + nm: pres.zero() for nm in g.names},
        },
    )
    words = [
        w
        for w in rs.irreducible_words(2 * count_cap * n)
        if all(x <= count_cap for x in pres.word_labels(w))
    ]
    return dg_window(rs, der, words)
