"""Chevalley-Eilenberg chain and cochain complexes, and the curved algebra.

Chains: C_n(g, M) = Sym^n(g[1]) (x) M at cohomological degree -n, with the
differential contracting pairs through the bracket and single factors through
the module action.  Cochains: C^n(g, M) = Sym^n(g*[-1]) (x) M, assembled as
the graded transpose of the chain complex with the action inserted dually.

Sign conventions are mechanical Koszul-extraction signs on the suspended
generators; the two global sign choices the conventions leave open are frozen
to the values that make every differential square to zero (verified on
gl(1|1) and sl(2|1) with adjoint coefficients in the test suite).
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import Element, Generator, Presentation
from .complexes import ComplexWindow
from .degrees import COH1, Degree, GradedMap, GradedSpace
from .dgalgebra import SymGenerators
from .liealg import LieSuperalgebra


class CEModule:
    """A finite-dimensional g-module: a graded space plus action matrices."""

    def __init__(self, algebra: LieSuperalgebra, space: GradedSpace, action: dict):
        """``action[i]``: sparse matrix {(row, col): c} for the i-th basis element."""
        self.algebra = algebra
        self.space = space
        self.action = {
            i: {k: Fraction(v) for k, v in mat.items() if v}
            for i, mat in action.items()
        }
        for i, mat in self.action.items():
            want = Degree(0, algebra.sdegrees[i], 0)
            for (r, c) in mat:
                if space.degrees[r] - space.degrees[c] != want:
                    raise ValueError(
                        f"action of {algebra.names[i]} is not homogeneous of degree {want}"
                    )

    def act(self, i: int, vec: dict) -> dict:
        out: dict = {}
        for (r, c), a in self.action.get(i, {}).items():
            x = vec.get(c)
            if x:
                out[r] = out.get(r, Fraction(0)) + a * x
        return {k: v for k, v in out.items() if v}

    def bracket_compatible(self) -> list:
        """Pairs (i,j) where action([x_i,x_j]) != super-commutator of actions."""
        g = self.algebra
        bad = []
        dim = self.space.dim
        for i in range(g.dim):
            for j in range(g.dim):
                sign = -1 if (g.sdegrees[i] % 2) and (g.sdegrees[j] % 2) else 1
                for c in range(dim):
                    lhs: dict = {}
                    for k, coeff in g.bracket_basis(i, j).items():
                        for r, v in self.act(k, {c: coeff}).items():
                            lhs[r] = lhs.get(r, Fraction(0)) + v
                    rhs = self.act(i, self.act(j, {c: Fraction(1)}))
                    for r, v in self.act(j, self.act(i, {c: Fraction(1)})).items():
                        rhs[r] = rhs.get(r, Fraction(0)) - sign * v
                    if {k: v for k, v in lhs.items() if v} != {
                        k: v for k, v in rhs.items() if v
                    }:
                        bad.append((g.names[i], g.names[j]))
                        break
        return bad


def trivial_module(g: LieSuperalgebra) -> CEModule:
    return CEModule(g, GradedSpace([("1", Degree(0, 0, 0))]), {})


def adjoint_module(g: LieSuperalgebra) -> CEModule:
    space = GradedSpace((n, Degree(0, s, 0)) for n, s in zip(g.names, g.sdegrees))
    action = {}
    for i in range(g.dim):
        mat = {}
        for j in range(g.dim):
            for k, c in g.bracket_basis(i, j).items():
                mat[(k, j)] = c
        if mat:
            action[i] = mat
    return CEModule(g, space, action)


# The global sign left open by the Koszul-extraction conventions; frozen by
# requiring d^2 = 0 on gl(1|1) and sl(2|1) with adjoint coefficients.
_CHAIN_ACTION_SIGN = 1


def dual_module(module: CEModule) -> CEModule:
    """The dual g-module on the dual basis (degrees negated).

    (rho*(x) phi)(v) = -(-1)^(|x||phi|) phi(rho(x) v), which in matrices is a
    signed transpose.
    """
    g = module.algebra
    space = GradedSpace(
        (n + "'", -d) for n, d in zip(module.space.names, module.space.degrees)
    )
    action = {}
    for i, mat in module.action.items():
        dx = Degree(0, g.sdegrees[i], 0)
        out = {}
        for (r, c), a in mat.items():
            sign = -1 if (dx.total % 2) and (space.degrees[r].total % 2) else 1
            out[(c, r)] = -sign * a
        if out:
            action[i] = out
    return CEModule(g, space, action)


def _suspended(g: LieSuperalgebra) -> SymGenerators:
    return SymGenerators(
        (n, Degree(-1, s, 0)) for n, s in zip(g.names, g.sdegrees)
    )


def _dual_suspended(g: LieSuperalgebra) -> SymGenerators:
    return SymGenerators(
        (n + "*", Degree(1, -s, 0)) for n, s in zip(g.names, g.sdegrees)
    )


def _chain_lie_entries(g: LieSuperalgebra, sym: SymGenerators, mono: tuple) -> dict:
    """Bracket-contraction part of the chain differential on one monomial.

    Returns {target monomial: coefficient}.  For each pair of factor
    positions a < b, both factors are extracted to the front (Koszul signs),
    contracted through the bracket, and the result is reinserted canonically.
    """
    out: dict = {}
    plist = sym.positions(mono)
    n = len(plist)
    for a in range(n):
        for b in range(a + 1, n):
            i, j = plist[a], plist[b]
            sign_a = sym.extract_sign(mono, a)
            rest_a = list(mono)
            rest_a[i] -= 1
            rest_a = tuple(rest_a)
            sign_b = sym.extract_sign(rest_a, b - 1)
            rest = list(rest_a)
            rest[j] -= 1
            rest = tuple(rest)
            # decalage: the pairing of suspended factors against the
            # unsuspended bracket costs the first factor's s-parity
            dec = -1 if g.sdegrees[i] % 2 else 1
            for k, c in g.bracket_basis(i, j).items():
                ins = sym.insert_front_sign(k, rest)
                if ins is None:
                    continue
                s_ins, target = ins
                coeff = sign_a * sign_b * s_ins * dec * c
                if coeff:
                    out[target] = out.get(target, Fraction(0)) + coeff
    return {k: v for k, v in out.items() if v}


def _chain_action_terms(g, sym, module: CEModule, mono: tuple) -> list:
    """Action part: [(target monomial, g-basis index, sign)] per position.

    The factor moves rightward past the later ones onto the module; the
    contraction itself is odd and is applied at the back, so it also crosses
    the remaining monomial's total parity.
    """
    out = []
    plist = sym.positions(mono)
    total = sum(sym.totals[c] for c in plist)
    for a, i in enumerate(plist):
        crossed = sum(1 for c in plist[a + 1:] if sym.totals[c] % 2)
        sign = -1 if (sym.totals[i] % 2) and (crossed % 2) else 1
        rest_total = total - sym.totals[i]
        if rest_total % 2:
            sign = -sign
        rest = list(mono)
        rest[i] -= 1
        out.append((tuple(rest), i, _CHAIN_ACTION_SIGN * sign))
    return out


def chain_complex(g: LieSuperalgebra, module: CEModule | None = None, n_max: int = 4) -> ComplexWindow:
    """C_.(g, M) as a window in cohomological degrees [-n_max, 0]."""
    if module is None:
        module = trivial_module(g)
    sym = _suspended(g)
    slices = {}
    index = {}
    basis_by_level = {}
    for n in range(n_max + 1):
        monos = sym.monomials(n)
        basis = []
        for mono in monos:
            for mi in range(module.space.dim):
                index[(mono, mi)] = (len(basis))
                deg = sym.monomial_degree(mono) + module.space.degrees[mi]
                basis.append((f"{sym.name_of(mono)}|{module.space.names[mi]}", deg))
        basis_by_level[n] = [m for m in monos]
        slices[-n] = GradedSpace(basis)
    diffs = {}
    for n in range(1, n_max + 1):
        entries: dict = {}
        col = 0
        mdim = module.space.dim
        for mono in basis_by_level[n]:
            for mi in range(mdim):
                for target, c in _chain_lie_entries(g, sym, mono).items():
                    row = index[(target, mi)]
                    entries[(row, col)] = entries.get((row, col), Fraction(0)) + c
                for target, i, sign in _chain_action_terms(g, sym, module, mono):
                    for r, v in module.act(i, {mi: Fraction(sign)}).items():
                        row = index[(target, r)]
                        entries[(row, col)] = entries.get((row, col), Fraction(0)) + v
                col += 1
        entries = {k: v for k, v in entries.items() if v}
        if entries:
            diffs[-n] = GradedMap(slices[-n], slices[-n + 1], COH1, entries)
    return ComplexWindow(-n_max, 1, {**slices, 1: GradedSpace([])}, diffs)


def cochain_complex(g: LieSuperalgebra, module: CEModule | None = None, n_max: int = 4) -> ComplexWindow:
    """C^.(g, M) as a window in cohomological degrees [-1, n_max].

    Realized as the graded transpose of the chain complex with dualized
    coefficients (C^.(g,M) is the linear dual of C_.(g,M*)), which makes
    d^2 = 0 automatic; the top slice n_max is a window boundary.
    """
    if module is None:
        module = trivial_module(g)
    chains = chain_complex(g, dual_module(module), n_max)
    slices = {}
    for n in range(n_max + 1):
        src = chains.slice(-n)
        slices[n] = GradedSpace((f"({name})'", -deg) for name, deg in src)
    diffs = {}
    for n in range(n_max):
        d = chains.diffs.get(-(n + 1))
        if d is None:
            continue
        entries = {(j, i): c for (i, j), c in d.entries.items()}
        diffs[n] = GradedMap(slices[n], slices[n + 1], COH1, entries)
    return ComplexWindow(-1, n_max, {**slices, -1: GradedSpace([])}, diffs)


# -- the curved algebra B = U(g_ev) (x) Sym(g_odd*[-1]) -------------------------


class CurvedAlgebra:
    """(B, d = 0, c): d^2 = [c, -] holds trivially since c is central."""

    def __init__(self, presentation: Presentation, curvature: Element):
        self.presentation = presentation
        self.curvature = curvature

    def check_curvature_central(self, bound: int = 12) -> bool:
        rs = self.presentation.completed(2 * bound + 2)
        return rs.is_central(self.curvature, check_bound=False)


def curved_B(g: LieSuperalgebra) -> CurvedAlgebra:
    """The intermediate curved algebra splitting U(g) from the odd cochains.

    Generators: the even basis of g (enveloping relations) and the duals of
    the odd basis (polynomial, with the coadjoint commutation rule).  The
    curvature c is the even part of the bracket's dual composed with the
    projection to the odd duals: c = sum_i x_i * pr_odd(d(x_i*)), which is of
    degree (2,0,0) and central.
    """
    ev = g.even_indices()
    odd = g.odd_indices()
    gens = [Generator(g.names[i], Degree(0, g.sdegrees[i], 0), weight=1) for i in ev]
    gens += [Generator(g.names[j] + "*", Degree(1, -g.sdegrees[j], 0)) for j in odd]
    pres = Presentation(gens)
    pos_ev = {i: a for a, i in enumerate(ev)}
    pos_odd = {j: len(ev) + b for b, j in enumerate(odd)}
    rels = []
    # enveloping relations among the evens
    for b in range(len(ev)):
        for a in range(b):
            i, j = ev[a], ev[b]
            terms = {(b, a): Fraction(1), (a, b): Fraction(-1)}
            for k, c in g.bracket_basis(j, i).items():
                if k not in pos_ev:
                    raise ValueError("even part is not a subalgebra")
                terms[(pos_ev[k],)] = terms.get((pos_ev[k],), Fraction(0)) - c
            rels.append(Element(pres, terms))
    # dual odd generators commute among themselves (even total degree)
    for b in range(len(odd)):
        for a in range(b):
            rels.append(
                Element(
                    pres,
                    {
                        (pos_odd[odd[b]], pos_odd[odd[a]]): Fraction(1),
                        (pos_odd[odd[a]], pos_odd[odd[b]]): Fraction(-1),
                    },
                )
            )
    # mixed: [x, y*] = coadjoint action, <ad*_x y*, v> = -<y*, [x, v]>
    for i in ev:
        for j in odd:
            terms = {
                (pos_ev[i], pos_odd[j]): Fraction(1),
                (pos_odd[j], pos_ev[i]): Fraction(-1),
            }
            for v in odd:
                c = g.bracket_basis(i, v).get(j)
                if c:
                    terms[(pos_odd[v],)] = terms.get((pos_odd[v],), Fraction(0)) + c
            rels.append(Element(pres, terms))
    pres = Presentation(gens, rels)

    # curvature: for each even x_i, the odd-odd part of the dual bracket
    sym = _suspended(g)
    curvature = pres.zero()
    for i in ev:
        for mono in sym.monomials(2):
            entries = _chain_lie_entries(g, sym, mono)
            target = tuple(1 if k == i else 0 for k in range(g.dim))
            c = entries.get(target)
            if not c:
                continue
            if any(mono[j] and j not in odd for j in range(g.dim)):
                continue  # projection to Sym^2 of the odd duals
            word = [pos_ev[i]]
            for j in odd:
                word.extend([pos_odd[j]] * mono[j])
            curvature = curvature + Element(pres, {tuple(word): c})
    return CurvedAlgebra(pres, curvature)
