"""End-to-end reproduction of the sl(1,1) localization computation.

The stages: the anchor map from sl(1,1) into differential operators on the
torus-times-odd-line, the algebra of torus-invariant operators with its
abstract presentation, the moment map on associated graded rings, the
2-periodic free resolution of the invariant operators over the enveloping
algebra, the derived endomorphism algebra computed from that resolution, and
the weight specializations (generic weight and weight zero).

All claims are exact; unbounded objects are verified on windows cut along
conserved gradings (s-degree and the torus counting labels) with explicit
safety margins along the order filtration, which the differentials respect
up to a bounded shift.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import Element, Generator, Presentation, specialize
from .degrees import Degree, koszul_sign
from .diffops import SuperSpace, weyl_algebra
from .liealg import LieSuperalgebra, sl11
from .linalg import Echelon, rank


class RelationFailure(ValueError):
    """An asserted relation fails to rewrite to zero."""


class CompositeNonzero(ValueError):
    """Consecutive resolution maps fail to compose to zero."""


# -- the ambient operators and the anchor ----------------------------------------


def ambient_operators():
    """Differential operators on Spec k[t^(+-), eps]."""
    return weyl_algebra(SuperSpace(even=[("t", True)], odd=[("eps", 1)]))


ANCHOR_IMAGES = {"e": "eps*dt", "f": "t*deps", "h": "t*dt+eps*deps"}


class AnchorMap:
    """The map sl(1,1) -> D coming from the left translation action."""

    def __init__(self, bound: int = 20):
        self.algebra = sl11()
        self.ops = ambient_operators()
        self.rs = self.ops.completed(bound)
        self.images = {
            name: self.ops.parse(expr) for name, expr in ANCHOR_IMAGES.items()
        }

    def rho(self, name: str) -> Element:
        return self.images[name]

    def lie_map_violations(self) -> list:
        """Basis pairs where rho([x,y]) != [rho(x), rho(y)]."""
        g = self.algebra
        bad = []
        for i, xi in enumerate(g.names):
            for j, xj in enumerate(g.names):
                lhs = self.ops.presentation.zero()
                for k, c in g.bracket_basis(i, j).items():
                    lhs = lhs + c * self.images[g.names[k]]
                sign = koszul_sign(
                    Degree(0, g.sdegrees[i], 0), Degree(0, g.sdegrees[j], 0)
                )
                rhs = self.images[xi] * self.images[xj] - sign * (
                    self.images[xj] * self.images[xi]
                )
                if not self.rs.reduce(rhs - lhs).is_zero():
                    bad.append((xi, xj))
        return bad


def build_anchor(bound: int = 20) -> AnchorMap:
    anchor = AnchorMap(bound)
    bad = anchor.lie_map_violations()
    if bad:
        raise RelationFailure(f"anchor fails the Lie property at {bad}")
    return anchor


# -- torus invariants -------------------------------------------------------------


def invariant_presentation() -> Presentation:
    """k[h] (x) k<alpha, f> / ([alpha,f] = 1, alpha^2 = f^2 = 0), h central."""
    gens = [
        Generator("h", Degree(0, 0, 0), weight=1),
        Generator("alpha", Degree(0, 1, 0), weight=0),
        Generator("f", Degree(0, -1, 0), weight=1),
    ]
    rels = [
        "alpha*alpha",
        "f*f",
        "f*alpha+alpha*f-1",
        "alpha*h-h*alpha",
        "f*h-h*f",
    ]
    return Presentation(gens, rels)


INVARIANT_IMAGES = {"h": "t*dt+eps*deps", "alpha": "eps*t^-1", "f": "t*deps"}


class TInvariantData:
    def __init__(self, presentation, images, anchor):
        self.presentation = presentation
        self.images = images
        self.anchor = anchor


def t_invariant_algebra(anchor: AnchorMap | None = None, window: int = 6) -> TInvariantData:
    """The invariant operators with their abstract presentation, verified.

    Checks: every abstract relation rewrites to zero under the substitution
    (RelationFailure otherwise); the identity e = alpha*h holds on the nose;
    and the (s-degree, order) dimension tables of the abstract presentation
    and of the weight-zero operator subspace agree over the window.
    """
    anchor = anchor or build_anchor()
    ops = anchor.ops
    rs = anchor.rs
    pres = invariant_presentation()
    images = {name: ops.parse(expr) for name, expr in INVARIANT_IMAGES.items()}

    def substitute(elem: Element) -> Element:
        out = ops.presentation.zero()
        for w, c in elem.terms.items():
            term = ops.presentation.one()
            for i in w:
                term = term * images[pres.generators[i].name]
            out = out + c * term
        return rs.reduce(out)

    for r in pres.relations:
        if not substitute(r).is_zero():
            raise RelationFailure(f"invariant relation {r} does not vanish")
    e_img = anchor.rho("e")
    alpha_h = rs.reduce(images["alpha"] * images["h"])
    if not rs.reduce(e_img - alpha_h).is_zero():
        raise RelationFailure("e = alpha*h fails in the operator algebra")

    # dimension tables by (s, order)
    abstract = {}
    ars = pres.completed(2 * (window + 2) + 2)
    for w in ars.irreducible_words(window + 1):
        wt = pres.word_weight(w)
        s = pres.word_degree(w).s
        if wt <= window:
            abstract[(s, wt)] = abstract.get((s, wt), 0) + 1
    # torus weight = sum of the coordinate counting labels (t and eps both
    # have weight one); invariants are the weight-zero words
    concrete = {}
    dpres = ops.presentation
    for w in rs.irreducible_words(2 * window + 2):
        if sum(dpres.word_labels(w)) != 0:
            continue
        wt = dpres.word_weight(w)
        s = dpres.word_degree(w).s
        if wt <= window:
            concrete[(s, wt)] = concrete.get((s, wt), 0) + 1
    if abstract != concrete:
        raise RelationFailure(
            f"invariant Hilbert tables disagree: {abstract} vs {concrete}"
        )
    return TInvariantData(pres, images, anchor)


# -- moment map -------------------------------------------------------------------


def functions_on_gstar() -> Presentation:
    """Sym(sl(1,1)): free super-commutative on e, f, h (weights 1)."""
    gens = [
        Generator("e", Degree(0, 1, 0), weight=1),
        Generator("f", Degree(0, -1, 0), weight=1),
        Generator("h", Degree(0, 0, 0), weight=1),
    ]
    rels = ["e*e", "f*f", "f*e+e*f", "h*e-e*h", "h*f-f*h"]
    return Presentation(gens, rels)


def moment_map_check(bound: int = 6) -> dict:
    """The associated graded of the invariants and the moment map onto it.

    Verifies gr is super-commutative with the expected free table, that the
    map e -> alpha*h, f -> v_alpha, h -> h lands correctly, and that its
    kernel over the extended source O_g*[alpha] is exactly the ideal
    (e - alpha*h), by comparing Hilbert tables.
    """
    from .algebra import associated_graded

    dt = invariant_presentation()
    gr = associated_graded(dt)
    rs = gr.completed(2 * (bound + 2) + 2)
    report = {}
    # commutativity of gr: all super-commutators of generators vanish
    comm_ok = True
    for i, gi in enumerate(gr.generators):
        for j, gj in enumerate(gr.generators):
            x = Element(gr, {(i,): Fraction(1)})
            y = Element(gr, {(j,): Fraction(1)})
            sign = koszul_sign(gi.degree, gj.degree)
            if not rs.reduce(x * y - sign * (y * x)).is_zero():
                comm_ok = False
    report["gr_commutative"] = comm_ok
    # gr dims match the free super-commutative algebra k[h] (x) Lambda[alpha, v]
    table = rs.hilbert("length", bound)
    expected = {}
    for n in range(bound + 1):
        count = 0
        for a in (0, 1):
            for b in (0, 1):
                if n - a - b >= 0:
                    count += 1
        expected[n] = count
    report["gr_free_table"] = table == expected

    # the moment map from Sym(g)[alpha]
    source = Presentation(
        list(functions_on_gstar().generators)
        + [Generator("alpha", Degree(0, 1, 0), weight=0)],
        [
            "e*e", "f*f", "f*e+e*f", "h*e-e*h", "h*f-f*h",
            "alpha*alpha", "alpha*e+e*alpha", "alpha*f+f*alpha",
            "alpha*h-h*alpha",
        ],
    )
    images = {"e": "alpha*h", "f": "f", "h": "h", "alpha": "alpha"}

    def push(elem: Element) -> Element:
        out = gr.zero()
        for w, c in elem.terms.items():
            term = gr.one()
            for i in w:
                term = term * gr.parse(images[source.generators[i].name])
            out = out + c * term
        return rs.reduce(out)

    report["mu_e_is_alpha_h"] = push(source.gen("e") - source.parse("alpha*h")).is_zero()
    for r in source.relations:
        if not push(r).is_zero():
            report["mu_well_defined"] = False
            break
    else:
        report["mu_well_defined"] = True

    # kernel = (e - alpha h): compare dimension tables of source/(e - alpha h)
    # and gr by (s-degree, weight) -- the identification e = alpha*h shifts
    # word lengths, but respects s and the filtration weight
    def sw_table(pres2, window2):
        rs2 = pres2.completed(2 * (window2 + 2) + 2)
        out: dict = {}
        for w in rs2.irreducible_words(window2 + 2):
            wt = pres2.word_weight(w)
            if wt <= window2:
                s = pres2.word_degree(w).s
                out[(s, wt)] = out.get((s, wt), 0) + 1
        return out

    quotient = Presentation(
        source.generators,
        [repr(r) for r in source.relations] + ["e-alpha*h"],
    )
    gr_sw = sw_table(gr, bound)
    quot_sw = sw_table(quotient, bound)
    report["kernel_is_ideal"] = gr_sw == quot_sw
    # and the map is injective modulo that ideal: rank of mu per (s, weight)
    srs = source.completed(2 * (bound + 2) + 2)
    blocks: dict = {}
    for w in srs.irreducible_words(bound + 2):
        wt = source.word_weight(w)
        if wt <= bound:
            blocks.setdefault((source.word_degree(w).s, wt), []).append(w)
    ok = True
    for key, words in blocks.items():
        rows = []
        for w in words:
            img = push(Element(source, {w: Fraction(1)}))
            rows.append({iw: c for iw, c in img.terms.items()})
        if rank(rows) != quot_sw.get(key, 0):
            ok = False
    report["mu_rank_matches_quotient"] = ok
    return report


# -- the periodic resolution ------------------------------------------------------


def enveloping_two_generator() -> Presentation:
    """U(sl(1,1)) presented on e, f alone: k<e,f>/(e^2, f^2)."""
    gens = [
        Generator("e", Degree(0, 1, 0), weight=1, labels=(1, 0)),
        Generator("f", Degree(0, -1, 0), weight=1, labels=(0, 1)),
    ]
    return Presentation(gens, ["e*e", "f*f"])


class ResolutionData:
    """The 2-periodic free resolution of the invariants over U(sl(1,1)).

    ``matrix(k)`` is the right-multiplication matrix P_k -> P_(k-1) (free
    rank-2 modules, row-vector convention); the augmentation sends the two
    generators of P_0 to 1 and alpha.  ``gen_shift(k)`` gives the degree
    shifts of the stage-k generators that make everything homogeneous.
    """

    def __init__(self, n_terms: int = 6, bound: int = 20):
        self.ue = enveloping_two_generator()
        self.ue_rs = self.ue.completed(bound)
        self.dt = invariant_presentation()
        self.dt_rs = self.dt.completed(bound)
        e = self.ue.gen("e")
        f = self.ue.gen("f")
        zero = self.ue.zero()
        self.m1 = [[zero, e], [e, -1 * (e * f)]]
        self.m2 = [[e, zero], [zero, e]]
        self.n_terms = n_terms
        # images of the two-generator enveloping algebra in the invariants
        self.ue_images = {"e": self.dt.parse("alpha*h"), "f": self.dt.gen("f")}

    def matrix(self, k: int):
        if k < 1:
            raise ValueError("stages are numbered from 1")
        return self.m1 if k == 1 else self.m2

    def gen_shift(self, k: int):
        """Degree shifts of the stage-k free generators (slot 0, slot 1)."""
        base = [Degree(0, 0, 0), Degree(0, 1, 0)]  # P_0: images 1 and alpha
        if k == 0:
            return base
        s1 = [Degree(0, 2, 0), Degree(0, 1, 0)]
        if k == 1:
            return s1
        e_deg = Degree(0, 1, 0)
        return [d + e_deg * (k - 1) for d in s1]

    def push_to_dt(self, x: Element) -> Element:
        out = self.dt.zero()
        for w, c in x.terms.items():
            term = self.dt.one()
            for i in w:
                term = term * self.ue_images[self.ue.generators[i].name]
            out = out + c * term
        return self.dt_rs.reduce(out)

    def augment(self, tup) -> Element:
        """(x, y) in Ug^2 -> image(x)*1 + image(y)*alpha in the invariants."""
        x, y = tup
        return self.dt_rs.reduce(
            self.push_to_dt(x) + self.push_to_dt(y) * self.dt.gen("alpha")
        )

    def apply(self, k: int, tup):
        """Right multiplication by matrix k: P_k -> P_(k-1)."""
        m = self.matrix(k)
        x, y = tup
        return (
            self.ue_rs.reduce(x * m[0][0] + y * m[1][0]),
            self.ue_rs.reduce(x * m[0][1] + y * m[1][1]),
        )

    def composites_vanish(self) -> bool:
        one = self.ue.one()
        zero = self.ue.zero()
        for k in range(1, self.n_terms):
            for basis in ((one, zero), (zero, one)):
                img = self.apply(k, self.apply(k + 1, basis))
                if not (img[0].is_zero() and img[1].is_zero()):
                    raise CompositeNonzero(f"d_{k} o d_{k + 1} != 0")
        for basis in ((one, zero), (zero, one)):
            if not self.augment(self.apply(1, basis)).is_zero():
                raise CompositeNonzero("augmentation composite != 0")
        return True

    # -- window exactness ---------------------------------------------------

    def _ue_words(self, max_len: int):
        return self.ue_rs.irreducible_words(max_len)

    def _dt_words(self, max_order: int):
        out = []
        for w in self.dt_rs.irreducible_words(2 * max_order + 2):
            if self.dt.word_weight(w) <= max_order:
                out.append(w)
        return out

    def exactness_report(self, stages: int = 4, max_len: int = 8) -> dict:
        """Cycles supported in the safe sub-window are boundaries, per stage.

        Stage k >= 1 uses the free bigraded windows (exact, complete lines);
        stage 0 (kernel of the augmentation) and surjectivity onto the
        invariants use the order window with a margin of two.
        """
        report = {}
        words = self._ue_words(max_len)
        # free stages: P_(k+1) -> P_k -> P_(k-1), complete per (#e, #f) line
        for k in range(1, stages):
            cycles = []
            images = Echelon()
            for slot in (0, 1):
                for w in words:
                    x = Element(self.ue, {w: Fraction(1)})
                    tup = (x, self.ue.zero()) if slot == 0 else (self.ue.zero(), x)
                    img = self.apply(k + 1, tup)
                    images.add(self._tup_vec(img))
            safe = max_len - 2
            for slot in (0, 1):
                for w in words:
                    if len(w) > safe:
                        continue
                    x = Element(self.ue, {w: Fraction(1)})
                    tup = (x, self.ue.zero()) if slot == 0 else (self.ue.zero(), x)
                    cycles.append((tup, self._tup_vec(self.apply(k, tup))))
            # kernel of d_k on the safe span, then membership in the image span
            ker = _kernel_vectors(
                [vec for _, vec in cycles],
                [self._tup_vec(t) for t, _ in cycles],
            )
            ok = all(images.contains(v) for v in ker)
            report[f"stage_{k}"] = ok
        # stage 0: ker(augmentation) = image of d_1
        images = Echelon()
        for slot in (0, 1):
            for w in words:
                x = Element(self.ue, {w: Fraction(1)})
                tup = (x, self.ue.zero()) if slot == 0 else (self.ue.zero(), x)
                images.add(self._tup_vec(self.apply(1, tup)))
        cycles = []
        for slot in (0, 1):
            for w in words:
                if len(w) > max_len - 2:
                    continue
                x = Element(self.ue, {w: Fraction(1)})
                tup = (x, self.ue.zero()) if slot == 0 else (self.ue.zero(), x)
                cycles.append((self._tup_vec(tup), self._aug_vec(self.augment(tup))))
        ker = _kernel_vectors([v for _, v in cycles], [t for t, _ in cycles])
        report["stage_0"] = all(images.contains(v) for v in ker)
        # surjectivity of the augmentation in the order window
        image = Echelon()
        for slot in (0, 1):
            for w in words:
                x = Element(self.ue, {w: Fraction(1)})
                tup = (x, self.ue.zero()) if slot == 0 else (self.ue.zero(), x)
                image.add(self._aug_vec(self.augment(tup)))
        ok = True
        for w in self._dt_words(max_len // 2 - 1):
            if not image.contains({("dt", w): Fraction(1)}):
                ok = False
        report["augmentation_surjective"] = ok
        return report

    def _tup_vec(self, tup) -> dict:
        out = {}
        for slot, x in enumerate(tup):
            for w, c in x.terms.items():
                out[(slot, w)] = c
        return out

    def _aug_vec(self, elem: Element) -> dict:
        return {("dt", w): c for w, c in elem.terms.items()}


def _kernel_vectors(values, tags):
    """Basis of the kernel of tag_i -> values[i], as vectors in tag space.

    Feeds the pairs through a tracked echelon: a value dependent on earlier
    ones yields the kernel combination tag_i - sum(combo_j * tag_j).
    """
    ech = Echelon(track=True)
    kernel = []
    for i, (val, tag) in enumerate(zip(values, tags)):
        if not val:
            kernel.append(dict(tag))
            continue
        combo = ech.combination(val)
        if combo is None:
            ech.add(val, tag=i)
            continue
        vec = dict(tag)
        for j, c in combo.items():
            for k, v in tags[j].items():
                n = vec.get(k, Fraction(0)) - c * v
                if n:
                    vec[k] = n
                else:
                    vec.pop(k, None)
        if vec:
            kernel.append(vec)
    return kernel


def periodic_resolution(n_terms: int = 6, bound: int = 20) -> ResolutionData:
    res = ResolutionData(n_terms, bound)
    res.composites_vanish()
    return res


# -- the derived endomorphism algebra ---------------------------------------------


class EndomorphismTables:
    """Cohomology of Hom(P_., invariants) with its filtration tables.

    ``table[k]``: {(s, order cap w): cumulative dimension of H^k}.
    Class representatives are pairs of invariant-algebra elements.
    """

    def __init__(self, res: ResolutionData, stages: int, max_order: int):
        self.res = res
        self.stages = stages
        self.max_order = max_order
        self.dt_words = res._dt_words(max_order)
        self.word_pos = {w: i for i, w in enumerate(self.dt_words)}
        self.hat = {}  # (k, i, j) -> left-multiplication Element in dt
        for k in range(1, stages + 2):
            m = res.matrix(k)
            for i in (0, 1):
                for j in (0, 1):
                    self.hat[(k, i, j)] = res.push_to_dt(m[i][j])

    def delta_apply(self, k: int, tup):
        """delta^k: Hom(P_(k-1)) -> Hom(P_k), left multiplication by hat(A_k)."""
        dt_rs = self.res.dt_rs
        out = []
        for i in (0, 1):
            acc = self.res.dt.zero()
            for j in (0, 1):
                acc = acc + self.hat[(k, i, j)] * tup[j]
            out.append(dt_rs.reduce(acc))
        return tuple(out)

    def _vec(self, tup) -> dict:
        out = {}
        for slot, x in enumerate(tup):
            for w, c in x.terms.items():
                out[(slot, w)] = c
        return out

    def _word_order(self, w) -> int:
        return self.res.dt.word_weight(w)

    def _basis_tuples(self, order_cap: int):
        dt = self.res.dt
        for slot in (0, 1):
            for w in self.dt_words:
                if self._word_order(w) <= order_cap:
                    x = Element(dt, {w: Fraction(1)})
                    yield (
                        (x, dt.zero()) if slot == 0 else (dt.zero(), x),
                        (slot, w),
                    )

    def cohomology_classes(self, k: int):
        """(cycle reps, boundary echelon) at stage k, safe sub-window."""
        safe = self.max_order - 2
        cycles = []
        for tup, key in self._basis_tuples(safe):
            cycles.append((self._vec(tup), self._vec(self.delta_apply(k + 1, tup))))
        ker = _kernel_vectors([v for _, v in cycles], [t for t, _ in cycles])
        boundaries = Echelon()
        if k >= 1:
            for tup, key in self._basis_tuples(self.max_order):
                boundaries.add(self._vec(self.delta_apply(k, tup)))
        return ker, boundaries

    def table(self, k: int) -> dict:
        """Cumulative H^k dimensions per (s-degree, order <= w)."""
        ker, boundaries = self.cohomology_classes(k)
        dt = self.res.dt
        shift = self.res.gen_shift(k)
        out = {}
        safe = self.max_order - 2
        # group kernel vectors by s-line (they are line-homogeneous by
        # construction since the differentials preserve s)
        for w_cap in range(safe + 1):
            reps = Echelon()
            bnd = Echelon()
            per_line: dict = {}
            for vec in ker:
                if all(self._word_order(w) <= w_cap for (_, w) in vec):
                    if _new_mod_boundaries(vec, reps, boundaries):
                        line = self._line_of(vec, k)
                        per_line[line] = per_line.get(line, 0) + 1
            for line, count in per_line.items():
                out[(line, w_cap)] = count
        return out

    def _line_of(self, vec, k: int) -> int:
        dt = self.res.dt
        shift = self.res.gen_shift(k)
        lines = {
            dt.word_degree(w).s - shift[slot].s for (slot, w) in vec
        }
        if len(lines) != 1:
            raise ValueError("cohomology vector is not line-homogeneous")
        return lines.pop()


def _new_mod_boundaries(vec, reps: Echelon, boundaries: Echelon) -> bool:
    residue = boundaries.reduce(dict(vec))
    if not residue:
        return False
    return reps.add(residue)


def weyl_monad(stages: int = 4, max_order: int = 8) -> dict:
    """Derived endomorphisms of the invariants over the enveloping algebra.

    Reports the cumulative bigraded dimension tables per cohomological stage,
    h-centrality on class representatives, the vanishing of h times the
    stage-1 generator class, closure of the stage-0 classes under
    composition, and the match against the reference table of
    k[h,u]/(hu) (x) Lambda[a1,a2] generated from the computed degrees.
    """
    res = periodic_resolution()
    ends = EndomorphismTables(res, stages, max_order)
    dt = res.dt
    dt_rs = res.dt_rs
    report = {"tables": {}}
    for k in range(stages):
        tab = ends.table(k)
        report["tables"][k] = {f"s={line} w<={w}": v for (line, w), v in sorted(tab.items())}

    # h-centrality: left and right multiplication by h agree on classes
    h = dt.gen("h")
    ker0, bnd0 = ends.cohomology_classes(0)
    ker1, bnd1 = ends.cohomology_classes(1)

    def as_tuple(vec):
        xs = [dt.zero(), dt.zero()]
        for (slot, w), c in vec.items():
            xs[slot] = xs[slot] + Element(dt, {w: c})
        return tuple(xs)

    central = True
    for vec in ker0 + ker1:
        tup = as_tuple(vec)
        left = tuple(dt_rs.reduce(h * x) for x in tup)
        right = tuple(dt_rs.reduce(x * h) for x in tup)
        diff = ends._vec(tuple(l - r for l, r in zip(left, right)))
        bnd = bnd0 if vec in ker0 else bnd1
        if diff and not bnd.contains(diff):
            central = False
    report["h_central"] = central

    # the stage-1 generator class u = [(alpha, 0)]; h*u must be a boundary
    u_rep = (dt.gen("alpha"), dt.zero())
    is_cycle = all(x.is_zero() for x in ends.delta_apply(2, u_rep))
    hu = tuple(dt_rs.reduce(h * x) for x in u_rep)
    report["u_is_cycle"] = is_cycle
    report["u_nonzero"] = not bnd1.contains(ends._vec(u_rep))
    report["h_times_u_vanishes"] = bnd1.contains(ends._vec(hu))

    # stage-0 classes are closed under composition
    comp_ok = True
    reps0 = []
    ech0 = Echelon()
    for vec in ker0:
        r = bnd0.reduce(dict(vec))
        if r and ech0.add(r):
            reps0.append(as_tuple(vec))
    for phi in reps0:
        for psi in reps0:
            comp = _compose_endos(res, phi, psi)
            if comp is None:
                continue  # outside the window: no verdict at this order
            vec = ends._vec(comp)
            cyc = ends.delta_apply(1, comp)
            if any(not x.is_zero() for x in cyc):
                comp_ok = False
    report["h0_composition_closed"] = comp_ok

    # reference table: k[h,u]/(hu) (x) Lambda[a1, a2] with the computed
    # generator bidegrees h: (s 0, w 1), u: (s -1, w 1), a1: (s 1, w 0),
    # a2: (s -1, w 1)
    ref = _reference_table(stages, max_order - 2)
    got = {k: ends.table(k) for k in range(stages)}
    report["matches_reference"] = got == ref
    if not report["matches_reference"]:
        report["reference"] = {
            k: {f"s={line} w<={w}": v for (line, w), v in sorted(tab.items())}
            for k, tab in ref.items()
        }
    return report


def _compose_endos(res: ResolutionData, phi, psi):
    """psi o phi for stage-0 classes: phi, psi are (value at 1, value at alpha).

    A stage-0 cocycle determines the endomorphism x + y*alpha ->
    x*phi_1 + y*phi_alpha; composing requires re-expressing phi's values in
    the form image(x) + image(y)*alpha, solved by linear algebra over the
    order window (None when the window cannot decide).
    """
    dt, dt_rs = res.dt, res.dt_rs
    words = res._dt_words(8)
    ue_words = res._ue_words(8)
    # basis of { image(x) + image(y)*alpha } with tracked coordinates
    ech = Echelon(track=True)
    tags = {}
    count = 0
    alpha = dt.gen("alpha")
    for slot in (0, 1):
        for w in ue_words:
            x = Element(res.ue, {w: Fraction(1)})
            val = res.push_to_dt(x)
            if slot == 1:
                val = dt_rs.reduce(val * alpha)
            vec = {iw: c for iw, c in val.terms.items()}
            if ech.add(vec, tag=(slot, w)):
                count += 1
    out = []
    for target in phi:
        vec = dict(target.terms)
        combo = ech.combination(vec)
        if combo is None:
            return None
        # apply psi to the decomposition: (x, y) -> x*psi_1 + y*psi_alpha
        acc = dt.zero()
        for (slot, w), c in combo.items():
            img = res.push_to_dt(Element(res.ue, {w: c}))
            acc = acc + img * psi[slot]
        out.append(dt_rs.reduce(acc))
    return tuple(out)


def _reference_table(stages: int, max_w: int) -> dict:
    """Dimension tables of k[h,u]/(hu) (x) Lambda[a1,a2].

    Computed generator bidegrees (s-degree, order): h (0,1), u (-1,0),
    a1 (1,0) [right multiplication by alpha], a2 (-1,1) [right
    multiplication by f]; basis monomials h^n L and u^k L (k >= 1) with
    L in {1, a1, a2, a1 a2}; tables list cumulative counts per
    (s, order <= w) at each cohomological stage.
    """
    lam = [(0, 0), (1, 0), (-1, 1), (0, 1)]  # 1, a1, a2, a1*a2
    out = {}
    for k in range(stages):
        tab: dict = {}
        for w_cap in range(max_w + 1):
            per_line: dict = {}
            if k == 0:
                for n in range(w_cap + 1):
                    for (ls, lw) in lam:
                        if n + lw <= w_cap:
                            per_line[ls] = per_line.get(ls, 0) + 1
            else:
                for (ls, lw) in lam:
                    if lw <= w_cap:
                        s = -k + ls
                        per_line[s] = per_line.get(s, 0) + 1
            for line, v in per_line.items():
                tab[(line, w_cap)] = v
        out[k] = tab
    return out


# -- weight specializations -------------------------------------------------------


def weight_specialize(lam) -> dict:
    lam = Fraction(lam)
    if lam != 0:
        return _specialize_nonzero(lam)
    return _specialize_zero()


def _specialize_nonzero(lam) -> dict:
    """The quotient at h = lambda: a 4-dimensional Morita-trivial algebra."""
    dt = invariant_presentation()
    q = specialize(dt, "h", lam)
    rs = q.completed(12)
    words = rs.irreducible_words(6)
    report = {"dimension": len(words)}
    # center
    word_index = {w: i for i, w in enumerate(words)}
    rows = []
    for gname in q._index:
        ge = q.gen(gname)
        per_target: dict = {}
        for w in words:
            we = Element(q, {w: Fraction(1)})
            sign = koszul_sign(q.word_degree(w), q.generators[q._index[gname]].degree)
            comm = rs.reduce(we * ge - sign * (ge * we))
            for cw, c in comm.terms.items():
                per_target.setdefault(cw, {})[word_index[w]] = c
        rows.extend(per_target.values())
    report["center_dimension"] = len(words) - rank(rows)
    # 2-dimensional simple module: basis {1, alpha}, f acts by lambda-scaled
    # contraction (alpha f + f alpha = lambda after clearing h -> lambda)
    a_mat = {(1, 0): Fraction(1)}
    f_mat = {(0, 1): lam}
    mats = {"alpha": a_mat, "f": f_mat}

    def apply_word(word):
        dim = 2
        out = {(i, i): Fraction(1) for i in range(dim)}
        for gi in reversed(word):
            mat = mats[q.generators[gi].name]
            nxt: dict = {}
            for (r, m), v in mat.items():
                for (m2, c), v2 in out.items():
                    if m == m2:
                        nxt[(r, c)] = nxt.get((r, c), Fraction(0)) + v * v2
            out = {k: v for k, v in nxt.items() if v}
        return out

    rel_ok = True
    for rel in q.relations:
        acc: dict = {}
        for w, c in rel.terms.items():
            for k, v in apply_word(w).items():
                acc[k] = acc.get(k, Fraction(0)) + c * v
        if any(acc.values()):
            rel_ok = False
    report["module_well_defined"] = rel_ok
    report["module_dimension"] = 2
    image_rows = [dict(apply_word(w)) for w in words]
    report["matrix_algebra"] = rank(image_rows) == 4
    return report


def singularity_presentation() -> Presentation:
    """W = k[h, u]/(h u) with h the filtration variable and u its Koszul dual."""
    gens = [
        Generator("h", Degree(0, 0, 1)),
        Generator("u", Degree(1, -1, 0)),
    ]
    return Presentation(gens, ["u*h-h*u", "h*u"])


def _specialize_zero(window: int = 8, stage_range: int = 6) -> dict:
    """Weight zero: endomorphism tables of k[u] over k[h,u]/(hu).

    Both the classical Ext table (half-infinite resolution) and the stable
    table (complete 2-periodic resolution) are computed from the explicit
    resolution ... -> W --u--> W --h--> W -> k[u] with maps alternating
    multiplication by h and by u; dualizing into k[u] turns these into the
    zero map and multiplication by u respectively.
    """
    w_pres = singularity_presentation()
    rs = w_pres.completed(2 * window + 4)
    report = {}
    tab = rs.hilbert("length", window)
    report["w_table"] = [tab.get(n, 0) for n in range(window + 1)]

    # Hom(P_k, Y): coordinates u^0 .. u^window, safe u-degrees <= window - 1.
    # delta^k = (u .) for k even, 0 for k odd; the maps never lower u-degree,
    # so kernels and images at safe degrees are exact.
    def delta_vec(k: int, vec: dict) -> dict:
        if k % 2 == 1:
            return {}
        return {j + 1: c for j, c in vec.items()}

    safe = window - 1

    def stage_dims(k: int) -> dict:
        """u-degree -> number of H^k classes with a representative there."""
        cycles = []
        for j in range(safe + 1):
            img = delta_vec(k + 1, {j: Fraction(1)})
            cycles.append(({j: Fraction(1)}, img))
        ker = _kernel_vectors([v for _, v in cycles], [t for t, _ in cycles])
        boundaries = Echelon()
        for j in range(window + 1):
            b = delta_vec(k, {j: Fraction(1)})
            if b:
                boundaries.add(b)
        reps = Echelon()
        out: dict = {}
        for vec in ker:
            residue = boundaries.reduce(dict(vec))
            if residue and reps.add(residue):
                j = min(vec)
                out[j] = out.get(j, 0) + 1
        return out

    classical = {k: stage_dims(k) for k in range(stage_range)}
    report["classical"] = classical
    # the complete resolution is 2-periodic in both directions, so negative
    # stages repeat the pattern: the stable table depends only on parity
    report["stable"] = {k: stage_dims(2 + (k % 2)) for k in range(-stage_range, stage_range)}

    # u * sigma: sigma is the stage-2 class of u^0; u * sigma is represented
    # by u^1 in Hom(P_2, Y) and must be a boundary of delta^2 = (u .)
    boundaries2 = Echelon()
    for j in range(window + 1):
        b = delta_vec(2, {j: Fraction(1)})
        if b:
            boundaries2.add(b)
    report["u_times_sigma_vanishes"] = boundaries2.contains({1: Fraction(1)})

    # degree bookkeeping: the class of u^j at stage 0 has Degree (j,-j,0);
    # the stage-2m class of u^0 has Degree (m,m,-m) = stage minus the
    # generator shift m*(deg h + deg u).  Dropping the h-component aligns
    # the table with the cochain cohomology of sl(1,1).
    degrees = []
    deg_h = Degree(0, 0, 1)
    deg_u = Degree(1, -1, 0)
    for k, dims in classical.items():
        shift = ((k + 1) // 2) * deg_h + (k // 2) * deg_u
        for j, count in dims.items():
            cls = Degree(k, 0, 0) + deg_u * j - shift
            degrees.append(((cls.coh, cls.s, cls.h), count))
    report["class_degrees"] = sorted(degrees)
    return report
