"""Finite-dimensional Z-graded Lie superalgebras from structure constants.

Basis elements carry a super degree (coh = h = 0); structure constants are
exact rationals stored for ordered pairs i <= j, with the signed transpose
derived, so super-antisymmetry holds by construction.  The bracket satisfies
the signed Jacobi identity

    [[x,y],z] = [x,[y,z]] - (-1)^(|x||y|) [y,[x,z]],

which is checkable (jacobi_check) rather than assumed.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import Element, Generator, Presentation
from .degrees import Degree


class LieSuperalgebra:
    def __init__(self, basis, brackets):
        """``basis``: list of (name, s_degree); ``brackets``: {(i,j): {k: c}} for i <= j."""
        self.names = tuple(n for n, _ in basis)
        self.sdegrees = tuple(s for _, s in basis)
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis names must be unique")
        self._index = {n: i for i, n in enumerate(self.names)}
        self._brackets = {}
        for (i, j), val in brackets.items():
            if i > j:
                raise ValueError("store brackets for ordered pairs i <= j only")
            val = {k: Fraction(c) for k, c in val.items() if c}
            if not val:
                continue
            for k in val:
                if self.sdegrees[k] != self.sdegrees[i] + self.sdegrees[j]:
                    raise ValueError(
                        f"bracket [{self.names[i]},{self.names[j]}] breaks degree additivity"
                    )
            if i == j and self.sdegrees[i] % 2 == 0:
                raise ValueError(f"[x,x] must vanish for even {self.names[i]}")
            self._brackets[(i, j)] = val

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def degree(self, i: int) -> Degree:
        return Degree(0, self.sdegrees[i], 0)

    def bracket_basis(self, i: int, j: int) -> dict:
        """[x_i, x_j] as a sparse coefficient vector."""
        if i <= j:
            return dict(self._brackets.get((i, j), {}))
        sign = -1 if (self.sdegrees[i] % 2) and (self.sdegrees[j] % 2) else 1
        return {k: -sign * c for k, c in self._brackets.get((j, i), {}).items()}

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket_basis(i, j).items():
                    v = out.get(k, Fraction(0)) + a * b * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out

    def even_indices(self):
        return [i for i, s in enumerate(self.sdegrees) if s % 2 == 0]

    def odd_indices(self):
        return [i for i, s in enumerate(self.sdegrees) if s % 2 != 0]

    def __repr__(self):
        return f"LieSuperalgebra<{','.join(self.names)}>"


def jacobi_check(g: LieSuperalgebra) -> list:
    """All triples violating the signed Jacobi identity (empty = pass)."""
    violations = []
    n = g.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = g.bracket(g.bracket({i: 1}, {j: 1}), {k: 1})
                rhs = g.bracket({i: 1}, g.bracket({j: 1}, {k: 1}))
                sign = -1 if (g.sdegrees[i] % 2) and (g.sdegrees[j] % 2) else 1
                for m, c in g.bracket({j: 1}, g.bracket({i: 1}, {k: 1})).items():
                    v = rhs.get(m, Fraction(0)) - sign * c
                    if v:
                        rhs[m] = v
                    else:
                        rhs.pop(m, None)
                if lhs != rhs:
                    violations.append((g.names[i], g.names[j], g.names[k]))
    return violations


def gl(shape) -> LieSuperalgebra:
    """gl(V) for V with basis vectors of the given s-degrees.

    ``shape`` is a list of (s_degree, multiplicity) pairs, read in order.  The
    basis consists of matrix units ``Eij`` sending the i-th basis vector of V
    to the j-th, so Eij has s-degree s_j - s_i and Eab*Ecd = delta(b,c)*Ead;
    the bracket is the super commutator.
    """
    svec = []
    for s, mult in shape:
        if mult < 1:
            raise ValueError("multiplicities must be >= 1")
        svec.extend([s] * mult)
    d = len(svec)
    basis = []
    pos = {}
    for i in range(d):
        for j in range(d):
            pos[(i, j)] = len(basis)
            basis.append((f"E{i + 1}{j + 1}", svec[j] - svec[i]))
    brackets = {}
    for a in range(len(basis)):
        for b in range(a, len(basis)):
            (i, j) = divmod(a, d)
            (k, l) = divmod(b, d)
            out: dict = {}
            if j == k:
                out[pos[(i, l)]] = out.get(pos[(i, l)], Fraction(0)) + 1
            sa = svec[j] - svec[i]
            sb = svec[l] - svec[k]
            sign = -1 if (sa % 2) and (sb % 2) else 1
            if l == i:
                out[pos[(k, j)]] = out.get(pos[(k, j)], Fraction(0)) - sign
            out = {m: c for m, c in out.items() if c}
            if out:
                brackets[(a, b)] = out
    return LieSuperalgebra(basis, brackets)


def supertrace_coefficients(shape) -> list:
    """str(Eii) = (-1)^(s_i); zero off the diagonal."""
    svec = []
    for s, mult in shape:
        svec.extend([s] * mult)
    return [Fraction(-1) ** (s % 2) for s in svec]


def _subalgebra_from_vectors(parent: LieSuperalgebra, vectors, names) -> LieSuperalgebra:
    """Close the given independent coefficient vectors under the bracket.

    The vectors must already span a bracket-closed subspace; brackets are
    re-expressed in the new basis by exact solving.
    """
    from .linalg import Echelon

    ech = Echelon(track=True)
    for n, v in enumerate(vectors):
        if not ech.add(dict(v), tag=n):
            raise ValueError("subalgebra vectors must be independent")
    sdeg = []
    for v in vectors:
        degs = {parent.sdegrees[i] for i in v}
        if len(degs) != 1:
            raise ValueError("subalgebra basis vectors must be homogeneous")
        sdeg.append(degs.pop())
    basis = list(zip(names, sdeg))

    brackets = {}
    for a in range(len(vectors)):
        for b in range(a, len(vectors)):
            br = parent.bracket(dict(vectors[a]), dict(vectors[b]))
            if br:
                combo = ech.combination(br)
                if combo is None:
                    raise ValueError("subalgebra is not bracket-closed")
                brackets[(a, b)] = combo
    return LieSuperalgebra(basis, brackets)


def sl(shape) -> LieSuperalgebra:
    """Supertrace-zero subalgebra of gl(shape).

    Basis: all off-diagonal matrix units plus, for consecutive diagonal
    positions, h_i = Eii - str(Eii)*str(E(i+1)(i+1)) * E(i+1)(i+1) (so that
    each h_i is supertraceless).
    """
    parent = gl(shape)
    svec = []
    for s, mult in shape:
        svec.extend([s] * mult)
    d = len(svec)
    str_coeff = supertrace_coefficients(shape)
    vectors = []
    names = []
    for i in range(d):
        for j in range(d):
            if i != j:
                vectors.append({parent.index(f"E{i + 1}{j + 1}"): Fraction(1)})
                names.append(f"E{i + 1}{j + 1}")
    for i in range(d - 1):
        vectors.append(
            {
                parent.index(f"E{i + 1}{i + 1}"): Fraction(1),
                parent.index(f"E{i + 2}{i + 2}"): -str_coeff[i] * str_coeff[i + 1],
            }
        )
        names.append(f"h{i + 1}")
    return _subalgebra_from_vectors(parent, vectors, names)


def sl11() -> LieSuperalgebra:
    """sl(1,1) on basis e, f, h with [e,f] = h, [h,e] = [h,f] = 0."""
    return LieSuperalgebra(
        [("e", 1), ("f", -1), ("h", 0)],
        {(0, 1): {2: Fraction(1)}},
    )


class SubalgebraSpec:
    """A bracket-closed span of parent basis elements, given by indices."""

    def __init__(self, parent: LieSuperalgebra, indices):
        self.parent = parent
        self.indices = tuple(sorted(indices))
        members = set(self.indices)
        for i in self.indices:
            for j in self.indices:
                if i <= j:
                    br = parent._brackets.get((i, j), {})
                    if any(k not in members for k in br):
                        raise ValueError(
                            f"span not closed under bracket at ({parent.names[i]},{parent.names[j]})"
                        )

    @property
    def names(self):
        return tuple(self.parent.names[i] for i in self.indices)

    def __repr__(self):
        return f"SubalgebraSpec[{','.join(self.names)}]"


def borel_and_nilradical(g: LieSuperalgebra, order=None) -> tuple[SubalgebraSpec, SubalgebraSpec]:
    """Upper-triangular and strictly-upper-triangular spans of a gl/sl algebra.

    ``order`` is a permutation of the V-basis positions 1..d (default the
    declaration order): position p precedes q when order.index(p) <
    order.index(q).  Only matrix-unit basis elements are considered; diagonal
    combinations (the h_i of sl) count as triangular.
    """
    d = None
    positions = {}
    for idx, name in enumerate(g.names):
        if name.startswith("E") and name[1:].isdigit() and len(name) == 3:
            i, j = int(name[1]), int(name[2])
            positions[idx] = (i, j)
            d = max(d or 0, i, j)
    if d is None:
        raise ValueError("borel_and_nilradical expects a gl/sl-type algebra")
    order = list(order) if order is not None else list(range(1, d + 1))
    rank_of = {p: r for r, p in enumerate(order)}
    borel = []
    nil = []
    for idx, name in enumerate(g.names):
        if idx in positions:
            i, j = positions[idx]
            if rank_of[i] < rank_of[j]:
                borel.append(idx)
                nil.append(idx)
            elif i == j:
                borel.append(idx)
        else:
            borel.append(idx)  # diagonal combinations h_i
    return SubalgebraSpec(g, borel), SubalgebraSpec(g, nil)


def universal_enveloping(g: LieSuperalgebra) -> Presentation:
    """U(g): one weight-1 generator per basis element, commutator relations."""
    gens = [Generator(n, Degree(0, s, 0), weight=1) for n, s in zip(g.names, g.sdegrees)]
    pres = Presentation(gens)
    rels = []
    for j in range(g.dim):
        for i in range(j):
            sign = -1 if (g.sdegrees[i] % 2) and (g.sdegrees[j] % 2) else 1
            terms = {(j, i): Fraction(1), (i, j): Fraction(-sign)}
            for k, c in g.bracket_basis(j, i).items():
                terms[(k,)] = terms.get((k,), Fraction(0)) - c
            rels.append(Element(pres, terms))
    for i in range(g.dim):
        if g.sdegrees[i] % 2:
            terms = {(i, i): Fraction(1)}
            for k, c in g.bracket_basis(i, i).items():
                terms[(k,)] = terms.get((k,), Fraction(0)) - c / 2
            rels.append(Element(pres, terms))
    return Presentation(gens, rels, commutation_shortcut=True)


def pbw_monomial_dims(g: LieSuperalgebra, n: int) -> list:
    """Degree-k dimensions of Sym(g_even) (x) Lambda(g_odd), k = 0..n."""
    dims = [0] * (n + 1)
    ne = len(g.even_indices())
    odd = len(g.odd_indices())
    from math import comb

    for k in range(n + 1):
        total = 0
        for j in range(0, min(odd, k) + 1):
            rest = k - j
            even_count = comb(ne + rest - 1, rest) if ne else (1 if rest == 0 else 0)
            total += comb(odd, j) * even_count
        dims[k] = total
    return dims


def pbw_check(g: LieSuperalgebra, n: int) -> bool:
    """dim gr_k U(g) (by word length) against the free super-commutative count."""
    pres = universal_enveloping(g)
    rs = pres.completed(2 * n + 2)
    table = rs.hilbert("length", n)
    expected = pbw_monomial_dims(g, n)
    return [table.get(k, 0) for k in range(n + 1)] == expected


# -- file format --------------------------------------------------------------


def lie_from_dict(data: dict) -> LieSuperalgebra:
    basis = [(b["name"], b.get("s", 0)) for b in data["basis"]]
    index = {n: i for i, (n, _) in enumerate(basis)}
    tmp = LieSuperalgebra(basis, {})
    brackets: dict = {}
    for br in data.get("brackets", ()):
        i, j = index[br["x"]], index[br["y"]]
        value = br["value"]
        vec: dict = {}
        if isinstance(value, str):
            pres = Presentation([Generator(n) for n, _ in basis])
            elem = pres.parse(value)
            for w, c in elem.terms.items():
                if len(w) != 1:
                    raise ValueError("bracket values must be linear in the basis")
                vec[w[0]] = vec.get(w[0], Fraction(0)) + c
        else:
            for name, c in value.items():
                vec[index[name]] = Fraction(c)
        if i > j:
            sign = -1 if (tmp.sdegrees[i] % 2) and (tmp.sdegrees[j] % 2) else 1
            i, j = j, i
            vec = {k: -sign * c for k, c in vec.items()}
        if (i, j) in brackets:
            raise ValueError(f"duplicate bracket for ({br['x']},{br['y']})")
        brackets[(i, j)] = vec
    return LieSuperalgebra(basis, brackets)


def load_lie(path) -> LieSuperalgebra:
    with open(path) as fh:
        return lie_from_dict(json.load(fh))
