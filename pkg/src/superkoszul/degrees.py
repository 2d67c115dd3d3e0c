"""Multidegrees, the Koszul sign rule, and finite graded vector spaces.

Every object in this package is graded by a triple of integers:

  * ``coh`` -- cohomological degree (raised by differentials),
  * ``s``   -- super degree (the Z-grading of super vector spaces),
  * ``h``   -- filtration degree (the extra grading introduced by Rees
    constructions; the formal variable of a Rees algebra sits in h-degree 1).

Signs are governed entirely by the *total* degree ``coh + s``: swapping two
homogeneous elements costs ``(-1)**(total1 * total2)``.  The h-component is
sign-inert.  Contexts that use fewer gradings set the unused components to 0.

Everything here is immutable and pure; all coefficients are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


@dataclass(frozen=True, order=True)
class Degree:
    """A multidegree (coh, s, h).  Addition is componentwise."""

    coh: int = 0
    s: int = 0
    h: int = 0

    def __add__(self, other: "Degree") -> "Degree":
        return Degree(self.coh + other.coh, self.s + other.s, self.h + other.h)

    def __sub__(self, other: "Degree") -> "Degree":
        return Degree(self.coh - other.coh, self.s - other.s, self.h - other.h)

    def __neg__(self) -> "Degree":
        return Degree(-self.coh, -self.s, -self.h)

    def __mul__(self, n: int) -> "Degree":
        return Degree(n * self.coh, n * self.s, n * self.h)

    __rmul__ = __mul__

    @property
    def total(self) -> int:
        """The sign-carrying degree: coh + s.  h never enters signs."""
        return self.coh + self.s

    @property
    def is_odd(self) -> bool:
        return self.total % 2 != 0

    def __repr__(self) -> str:
        return f"({self.coh},{self.s},{self.h})"


ZERO = Degree(0, 0, 0)
COH1 = Degree(1, 0, 0)


def koszul_sign(d1: Degree, d2: Degree) -> int:
    """Sign picked up when homogeneous elements of these degrees swap.

    Equal to ``(-1)**(total(d1)*total(d2))``; symmetric and bilinear in the
    exponent mod 2, and independent of the h-components.
    """
    return -1 if (d1.total % 2) and (d2.total % 2) else 1


def sign_of_permutation_passage(degrees: Iterable[Degree], past: Degree) -> int:
    """Sign of moving one element of degree ``past`` across a list of factors."""
    sign = 1
    for d in degrees:
        sign *= koszul_sign(d, past)
    return sign


class GradedSpace:
    """A finite ordered basis of named homogeneous vectors over Q."""

    __slots__ = ("names", "degrees", "_index")

    def __init__(self, basis: Iterable[tuple[str, Degree]]):
        names = []
        degrees = []
        for name, deg in basis:
            names.append(name)
            degrees.append(deg)
        self.names: tuple[str, ...] = tuple(names)
        self.degrees: tuple[Degree, ...] = tuple(degrees)
        self._index = {n: i for i, n in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise ValueError("basis names must be unique")

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def __iter__(self) -> Iterator[tuple[str, Degree]]:
        return iter(zip(self.names, self.degrees))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedSpace)
            and self.names == other.names
            and self.degrees == other.degrees
        )

    def __hash__(self):
        return hash((self.names, self.degrees))

    def __repr__(self) -> str:
        items = ", ".join(f"{n}:{d}" for n, d in self)
        return f"GradedSpace[{items}]"

    def dims_by_degree(self) -> dict[Degree, int]:
        out: dict[Degree, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out


class GradedMap:
    """A homogeneous linear map between graded spaces, stored sparsely.

    ``entries[(i, j)]`` is the coefficient of the i-th target basis vector in
    the image of the j-th source basis vector.  Every nonzero entry must
    connect degrees differing by exactly the map's degree.
    """

    __slots__ = ("source", "target", "degree", "entries")

    def __init__(
        self,
        source: GradedSpace,
        target: GradedSpace,
        degree: Degree,
        entries: dict[tuple[int, int], Fraction],
    ):
        self.source = source
        self.target = target
        self.degree = degree
        self.entries = {k: Fraction(v) for k, v in entries.items() if v != 0}
        for (i, j) in self.entries:
            if target.degrees[i] != source.degrees[j] + degree:
                raise ValueError(
                    f"entry ({i},{j}) connects {source.degrees[j]} to "
                    f"{target.degrees[i]}, not homogeneous of degree {degree}"
                )

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, degree: Degree = ZERO):
        return cls(source, target, degree, {})

    @classmethod
    def identity(cls, space: GradedSpace) -> "GradedMap":
        return cls(space, space, ZERO, {(i, i): Fraction(1) for i in range(space.dim)})

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedMap)
            and self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.entries == other.entries
        )

    def apply(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for (i, j), c in self.entries.items():
            x = vec.get(j)
            if x:
                out[i] = out.get(i, Fraction(0)) + c * x
        return {i: v for i, v in out.items() if v != 0}

    def compose(self, first: "GradedMap") -> "GradedMap":
        """self o first (apply ``first``, then ``self``)."""
        if first.target is not self.source and first.target != self.source:
            raise ValueError("composition mismatch")
        entries: dict[tuple[int, int], Fraction] = {}
        by_col: dict[int, list[tuple[int, Fraction]]] = {}
        for (i, j), c in self.entries.items():
            by_col.setdefault(j, []).append((i, c))
        for (m, j), c in first.entries.items():
            for (i, c2) in by_col.get(m, ()):
                key = (i, j)
                entries[key] = entries.get(key, Fraction(0)) + c2 * c
        return GradedMap(
            first.source, self.target, self.degree + first.degree, entries
        )

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if self.degree != other.degree:
            raise ValueError("cannot add maps of different degrees")
        entries = dict(self.entries)
        for k, v in other.entries.items():
            entries[k] = entries.get(k, Fraction(0)) + v
        return GradedMap(self.source, self.target, self.degree, entries)

    def scale(self, c) -> "GradedMap":
        c = Fraction(c)
        return GradedMap(
            self.source,
            self.target,
            self.degree,
            {k: c * v for k, v in self.entries.items()},
        )

    def __repr__(self) -> str:
        return (
            f"GradedMap({self.source.dim}->{self.target.dim}, deg={self.degree}, "
            f"{len(self.entries)} entries)"
        )


# Shift kinds accepted by :func:`shift`.
COH_SHIFT = "coh"
SUPER_SHIFT = "super"
TATE_TWIST = "tate"


def shift(space: GradedSpace, kind: str, n: int) -> GradedSpace:
    """Shift a graded space: V[n] (coh), V<n> (super), or the Tate twist V(n).

    Conventions: V[n]^i = V^(n+i), so a vector of coh degree d lands in coh
    degree d-n; likewise for the super shift.  The Tate twist shifts the
    filtration, F_p V(n) = F_(p+n) V, so h-degrees drop by n.  In all three
    cases the shift by -n is inverse to the shift by n.
    """
    if kind == COH_SHIFT:
        delta = Degree(-n, 0, 0)
    elif kind == SUPER_SHIFT:
        delta = Degree(0, -n, 0)
    elif kind == TATE_TWIST:
        delta = Degree(0, 0, -n)
    else:
        raise ValueError(f"unknown shift kind {kind!r}")
    return GradedSpace((name, deg + delta) for name, deg in space)


def tensor_space(v: GradedSpace, w: GradedSpace, sep: str = "⊗") -> GradedSpace:
    return GradedSpace(
        (f"{nv}{sep}{nw}", dv + dw) for nv, dv in zip(v.names, v.degrees) for nw, dw in zip(w.names, w.degrees)
    )


def tensor_with_braiding(v: GradedSpace, w: GradedSpace) -> tuple[GradedSpace, GradedMap]:
    """The tensor product V (x) W together with the symmetry V(x)W -> W(x)V.

    The braiding sends v(x)w to koszul_sign(|v|,|w|) * w(x)v; composing the
    two braidings V(x)W -> W(x)V -> V(x)W gives the identity.
    """
    vw = tensor_space(v, w)
    wv = tensor_space(w, v)
    nw = w.dim
    nv = v.dim
    entries = {}
    for i in range(nv):
        for j in range(nw):
            src = i * nw + j
            tgt = j * nv + i
            entries[(tgt, src)] = Fraction(koszul_sign(v.degrees[i], w.degrees[j]))
    return vw, GradedMap(vw, wv, ZERO, entries)


def tensor_map(f: GradedMap, g: GradedMap) -> GradedMap:
    """f (x) g with the Koszul sign: (f(x)g)(v(x)w) = ±f(v)(x)g(w).

    The sign (-1)^(|g| * |v|) comes from moving g past v.
    """
    src = tensor_space(f.source, g.source)
    tgt = tensor_space(f.target, g.target)
    ngs = g.source.dim
    ngt = g.target.dim
    entries: dict[tuple[int, int], Fraction] = {}
    for (i, j), c in f.entries.items():
        sgn = koszul_sign(g.degree, f.source.degrees[j])
        for (k, l), c2 in g.entries.items():
            entries[(i * ngt + k, j * ngs + l)] = sgn * c * c2
    return GradedMap(src, tgt, f.degree + g.degree, entries)
