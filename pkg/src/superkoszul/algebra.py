"""Finitely presented associative multigraded superalgebras.

An algebra is presented by homogeneous generators and homogeneous relations
inside the free (tensor) algebra; elements are Q-linear combinations of words
in the generators.  Word concatenation carries no signs: all Koszul signs
live inside the relations (commutator-form relations encode the super
structure).

Normal forms come from a bounded diamond-lemma completion of the relations
into a rewrite system oriented by the degree-lexicographic order (first by
word length, then lexicographically in generator declaration order).  A
completion run to bound ``2B+2`` certifies normal forms for words of length
up to ``B``; reductions never increase word length, so certified reductions
cannot escape the window.

Invertible generators (the torus coordinates) are handled by adjoining an
explicit inverse generator with the two unit relations; completion derives
the interaction of inverses with the other relations.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .degrees import Degree, ZERO, koszul_sign


class NonHomogeneousRelation(ValueError):
    """A relation mixes words of different multidegrees."""


class BoundTooSmall(ValueError):
    """The completion bound cannot accommodate the presentation."""


class BoundExceeded(ValueError):
    """A normal-form query left the certified window."""


class WeightIncompatibleRelation(ValueError):
    """A relation's terms exceed the weight of its leading word."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: Degree = ZERO
    weight: int = 0  # filtration weight used by the Rees construction
    labels: tuple = ()  # extra conserved integer gradings (torus weights etc.)


def _deglex_key(word):
    return (len(word), word)


_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z_][A-Za-z0-9_]*(?:\^-1)?|[*+()-])")


class Element:
    """A finite Q-linear combination of words in a presentation's generators."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: "Presentation", terms: dict):
        self.pres = pres
        self.terms = {w: Fraction(c) for w, c in terms.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.pres is other.pres and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Element") -> "Element":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, Fraction(0)) + c
        return Element(self.pres, terms)

    def __sub__(self, other: "Element") -> "Element":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, Fraction(0)) - c
        return Element(self.pres, terms)

    def __neg__(self) -> "Element":
        return Element(self.pres, {w: -c for w, c in self.terms.items()})

    def __rmul__(self, scalar) -> "Element":
        c = Fraction(scalar)
        return Element(self.pres, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other) -> "Element":
        if not isinstance(other, Element):
            return self.__rmul__(other)  # scalar on the right
        terms: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                terms[w] = terms.get(w, Fraction(0)) + c1 * c2
        return Element(self.pres, terms)

    def degree(self) -> Degree | None:
        """The common Degree of all terms; None for 0; raises if mixed."""
        deg = None
        for w in self.terms:
            d = self.pres.word_degree(w)
            if deg is None:
                deg = d
            elif d != deg:
                raise NonHomogeneousRelation(f"mixed degrees {deg} and {d} in {self}")
        return deg

    def is_homogeneous(self) -> bool:
        try:
            self.degree()
            return True
        except NonHomogeneousRelation:
            return False

    def leading_word(self):
        return max(self.terms, key=_deglex_key)

    def max_word_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=_deglex_key, reverse=True):
            c = self.terms[w]
            name = "*".join(self.pres.generators[i].name for i in w) or "1"
            if c == 1 and w:
                bits.append(name)
            elif c == -1 and w:
                bits.append(f"-{name}")
            else:
                bits.append(f"{c}*{name}" if w else f"{c}")
        out = bits[0]
        for b in bits[1:]:
            out += b if b.startswith("-") else "+" + b
        return out


class Presentation:
    """Generators plus homogeneous relations (and optional invertible names)."""

    def __init__(
        self,
        generators,
        relations=(),
        invertible=(),
        commutation_shortcut: bool = False,
    ):
        gens = list(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        invertible = tuple(invertible)
        for name in invertible:
            if name not in names:
                raise ValueError(f"invertible generator {name!r} not declared")
            base_at = names.index(name)
            base = gens[base_at]
            inv = Generator(
                name + "^-1",
                -base.degree,
                weight=-base.weight,
                labels=tuple(-x for x in base.labels),
            )
            # the inverse sits right after its base generator, so that words in
            # later generators (e.g. partials) stay deglex-larger and rewrite
            # toward the torus coordinates
            gens.insert(base_at + 1, inv)
            names.insert(base_at + 1, inv.name)
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.invertible = invertible
        self.commutation_shortcut = commutation_shortcut
        self._index = {g.name: i for i, g in enumerate(self.generators)}
        rels = [self.parse(r) if isinstance(r, str) else r for r in relations]
        for name in invertible:
            t = self.gen(name)
            tinv = self.gen(name + "^-1")
            rels.append(t * tinv - self.one())
            rels.append(tinv * t - self.one())
        self.relations: tuple[Element, ...] = tuple(rels)
        for r in self.relations:
            r.degree()  # raises NonHomogeneousRelation on mixed degrees
            self._word_labels_check(r)
        self._completed: dict[int, RewriteSystem] = {}

    # -- basic element constructors ------------------------------------

    def gen(self, name: str) -> Element:
        return Element(self, {(self._index[name],): Fraction(1)})

    def one(self) -> Element:
        return Element(self, {(): Fraction(1)})

    def zero(self) -> Element:
        return Element(self, {})

    def element(self, terms: dict) -> Element:
        """Build an element from {word: coeff} with words as name tuples."""
        out: dict = {}
        for w, c in terms.items():
            key = tuple(self._index[n] for n in w)
            out[key] = out.get(key, Fraction(0)) + Fraction(c)
        return Element(self, out)

    def word(self, *names: str) -> Element:
        return self.element({tuple(names): 1})

    # -- degree bookkeeping ---------------------------------------------

    def word_degree(self, word) -> Degree:
        d = ZERO
        for i in word:
            d = d + self.generators[i].degree
        return d

    def word_weight(self, word) -> int:
        return sum(self.generators[i].weight for i in word)

    def word_labels(self, word) -> tuple:
        n = max((len(g.labels) for g in self.generators), default=0)
        out = [0] * n
        for i in word:
            for k, x in enumerate(self.generators[i].labels):
                out[k] += x
        return tuple(out)

    def _word_labels_check(self, elem: Element):
        labs = {self.word_labels(w) for w in elem.terms}
        if len(labs) > 1:
            raise NonHomogeneousRelation(f"mixed label gradings in {elem}")

    # -- parsing ----------------------------------------------------------

    def parse(self, text: str) -> Element:
        tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"bad token at {text[pos:]!r}")
            tokens.append(m.group(1))
            pos = m.end()
        tokens.append(None)
        idx = 0

        def peek():
            return tokens[idx]

        def take():
            nonlocal idx
            t = tokens[idx]
            idx += 1
            return t

        def atom() -> Element:
            t = take()
            if t == "(":
                e = expr()
                if take() != ")":
                    raise ValueError("unbalanced parenthesis")
                return e
            if t == "-":
                return -atom()
            if t is None:
                raise ValueError("unexpected end of expression")
            if t[0].isdigit():
                return Fraction(t) * self.one()
            if t not in self._index:
                raise ValueError(f"unknown generator {t!r}")
            return self.gen(t)

        def term() -> Element:
            e = atom()
            while peek() == "*":
                take()
                e = e * atom()
            return e

        def expr() -> Element:
            e = term()
            while peek() in ("+", "-"):
                if take() == "+":
                    e = e + term()
                else:
                    e = e - term()
            return e

        out = expr()
        if peek() is not None:
            raise ValueError(f"trailing tokens near {peek()!r}")
        return out

    # -- completion (cached per bound) -------------------------------------

    def completed(self, bound: int) -> "RewriteSystem":
        if bound not in self._completed:
            self._completed[bound] = complete(self, bound)
        return self._completed[bound]

    def __repr__(self):
        names = ",".join(g.name for g in self.generators)
        return f"Presentation<{names}; {len(self.relations)} relations>"


class RewriteSystem:
    """A completed, oriented rewrite system with a certified window."""

    def __init__(self, pres: Presentation, rules: dict, completion_bound: int, certified_degree: int):
        self.pres = pres
        self.rules = rules  # leading word -> rhs Element (deglex-smaller)
        self.completion_bound = completion_bound
        self.certified_degree = certified_degree
        self._by_first: dict[int, list] = {}
        for lead in sorted(rules, key=_deglex_key):
            self._by_first.setdefault(lead[0], []).append(lead)

    def _find_redex(self, word):
        """Leftmost (position, lead) whose lead matches word at that position."""
        for pos in range(len(word)):
            for lead in self._by_first.get(word[pos], ()):
                n = len(lead)
                if word[pos : pos + n] == lead:
                    return pos, lead
        return None

    def reduce(self, x: Element) -> Element:
        """Full reduction; no window check (see normal_form for the public op)."""
        terms = dict(x.terms)
        while True:
            pending = None
            for w in terms:
                hit = self._find_redex(w)
                if hit is not None:
                    pending = (w, hit)
                    break
            if pending is None:
                return Element(self.pres, terms)
            w, (pos, lead) = pending
            c = terms.pop(w)
            rhs = self.rules[lead]
            pre, post = w[:pos], w[pos + len(lead):]
            for rw, rc in rhs.terms.items():
                nw = pre + rw + post
                nc = terms.get(nw, Fraction(0)) + c * rc
                if nc:
                    terms[nw] = nc
                else:
                    terms.pop(nw, None)

    def normal_form(self, x: Element) -> Element:
        if x.max_word_length() > self.certified_degree:
            raise BoundExceeded(
                f"word of length {x.max_word_length()} exceeds certified degree "
                f"{self.certified_degree} (completion bound {self.completion_bound})"
            )
        return self.reduce(x)

    def is_central(self, x: Element, check_bound: bool = True) -> bool:
        """Whether the super-commutator with every generator reduces to 0."""
        dx = x.degree()
        if dx is None:
            return True
        nf = self.normal_form if check_bound else self.reduce
        for i, g in enumerate(self.pres.generators):
            ge = Element(self.pres, {(i,): Fraction(1)})
            comm = x * ge - koszul_sign(dx, g.degree) * (ge * x)
            if not nf(comm).is_zero():
                return False
        return True

    # -- irreducible words -------------------------------------------------

    def is_irreducible(self, word) -> bool:
        return self._find_redex(word) is None

    def irreducible_words(self, max_len: int):
        """All rule-free words of length <= max_len, in deglex order."""
        ngen = len(self.pres.generators)
        maxlead = max((len(l) for l in self.rules), default=1)
        out = [()]
        layer = [()]
        for _ in range(max_len):
            nxt = []
            for w in layer:
                for g in range(ngen):
                    nw = w + (g,)
                    # only new suffixes can create a redex
                    tail = nw[-maxlead:]
                    ok = True
                    for pos in range(len(tail)):
                        for lead in self._by_first.get(tail[pos], ()):
                            n = len(lead)
                            if pos + n <= len(tail) and tail[pos : pos + n] == lead:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        nxt.append(nw)
            out.extend(nxt)
            layer = nxt
            if not layer:
                break
        return out

    def hilbert(self, grading: str = "length", bound: int = 8) -> dict:
        """Dimension table of the algebra: degree -> dimension.

        ``grading`` is "length" (word length) or one of "coh", "s", "h"
        (Degree components; requires the component to be bounded away from 0
        on all generators so the table is complete).
        """
        if bound > self.certified_degree:
            raise BoundExceeded(
                f"hilbert bound {bound} exceeds certified degree {self.certified_degree}"
            )
        words = self.irreducible_words(bound)
        table: dict = {}
        if grading == "length":
            for w in words:
                table[len(w)] = table.get(len(w), 0) + 1
            return {k: table[k] for k in sorted(table)}
        comps = {
            "coh": lambda w: self.pres.word_degree(w).coh,
            "s": lambda w: self.pres.word_degree(w).s,
            "h": lambda w: self.pres.word_degree(w).h,
        }
        if grading not in comps:
            raise ValueError(f"unknown grading {grading!r}")
        vals = [comps[grading]((i,)) for i in range(len(self.pres.generators))]
        if any(v == 0 for v in vals) or (min(vals) < 0 < max(vals)):
            raise ValueError(
                f"{grading}-grading is not bounded on the generators; "
                "the component table would be incomplete (use word length)"
            )
        for w in words:
            v = comps[grading](w)
            table[v] = table.get(v, 0) + 1
        step = min(abs(v) for v in vals)
        complete_upto = bound * step
        return {k: table[k] for k in sorted(table) if abs(k) <= complete_upto}


def complete(pres: Presentation, bound: int) -> RewriteSystem:
    """Diamond-lemma completion of the presentation up to the given bound.

    All overlap ambiguities among rules whose overlap word has length at most
    ``bound`` are resolved.  The returned system certifies normal forms for
    words of length up to ``(bound - 2) // 2``, provided the irreducible-word
    counts are stable under raising the bound by one (checked here).
    """
    maxrel = max((r.max_word_length() for r in pres.relations), default=0)
    if bound < maxrel:
        raise BoundTooSmall(f"bound {bound} < longest relation word {maxrel}")
    rules = _complete_rules(pres, bound)
    cert = max(0, (bound - 2) // 2)
    if cert and not pres.commutation_shortcut:
        rules1 = _complete_rules(pres, bound + 1)
        if _lead_counts(rules, cert + 1) != _lead_counts(rules1, cert + 1):
            cert = 0
    return RewriteSystem(pres, rules, bound, cert)


def _lead_counts(rules, upto):
    counts: dict = {}
    for lead in rules:
        if len(lead) <= upto:
            counts[lead] = True
    return counts


def _complete_rules(pres: Presentation, bound: int) -> dict:
    import heapq

    rules: dict = {}

    def reduce_terms(terms: dict) -> dict:
        # full reduction against the current rule dict
        by_first: dict = {}
        for lead in rules:
            by_first.setdefault(lead[0], []).append(lead)
        terms = {w: c for w, c in terms.items() if c}
        while True:
            hit = None
            for w in terms:
                for pos in range(len(w)):
                    for lead in by_first.get(w[pos], ()):
                        n = len(lead)
                        if w[pos : pos + n] == lead:
                            hit = (w, pos, lead)
                            break
                    if hit:
                        break
                if hit:
                    break
            if hit is None:
                return terms
            w, pos, lead = hit
            c = terms.pop(w)
            pre, post = w[:pos], w[pos + len(lead):]
            for rw, rc in rules[lead].terms.items():
                nw = pre + rw + post
                nc = terms.get(nw, Fraction(0)) + c * rc
                if nc:
                    terms[nw] = nc
                else:
                    terms.pop(nw, None)

    # obligations processed smallest-first (critical for termination: small
    # derived rules must retire speculative long ones before they snowball)
    heap: list = []
    seq = 0

    def push_relation(terms: dict):
        nonlocal seq
        terms = {w: c for w, c in terms.items() if c}
        if terms:
            lead = max(terms, key=_deglex_key)
            heapq.heappush(heap, (_deglex_key(lead), seq, "rel", terms))
            seq += 1

    def push_overlaps(lead):
        nonlocal seq
        for other in list(rules):
            for (u, v) in ((lead, other), (other, lead)) if other != lead else ((lead, lead),):
                for k in range(1, min(len(u), len(v))):
                    if u[len(u) - k:] == v[:k]:
                        w = u + v[k:]
                        if len(w) <= bound:
                            heapq.heappush(
                                heap, (_deglex_key(w), seq, "ovl", (u, v, k))
                            )
                            seq += 1

    for r in pres.relations:
        push_relation(dict(r.terms))

    guard = 0
    while heap:
        guard += 1
        if guard > 500000:
            raise BoundTooSmall("completion did not converge; raise the bound")
        _, _, kind, payload = heapq.heappop(heap)
        if kind == "rel":
            terms = reduce_terms(payload)
            if not terms:
                continue
            lead = max(terms, key=_deglex_key)
            if len(lead) > bound:
                raise BoundTooSmall(
                    f"relation lead of length {len(lead)} exceeds bound {bound}"
                )
            c = terms[lead]
            stale = [
                l
                for l in rules
                if any(l[i : i + len(lead)] == lead for i in range(len(l) - len(lead) + 1))
            ]
            rules[lead] = Element(pres, {w: -v / c for w, v in terms.items() if w != lead})
            for l in stale:
                rhs = rules.pop(l)
                full = Element(pres, {l: Fraction(1)}) - rhs
                push_relation(dict(full.terms))
            push_overlaps(lead)
        else:
            u, v, k = payload
            if u not in rules or v not in rules:
                continue
            spoly = {}
            for rw, rc in rules[u].terms.items():
                nw = rw + v[k:]
                spoly[nw] = spoly.get(nw, Fraction(0)) + rc
            for rw, rc in rules[v].terms.items():
                nw = u[: len(u) - k] + rw
                spoly[nw] = spoly.get(nw, Fraction(0)) - rc
            spoly = reduce_terms(spoly)
            if spoly:
                push_relation(spoly)
    # final interreduction of right-hand sides
    for lead in sorted(rules, key=_deglex_key):
        rules[lead] = Element(pres, reduce_terms(dict(rules[lead].terms)))
    return rules


# -- operation-style wrappers ----------------------------------------------


def normal_form(x: Element, rs: RewriteSystem) -> Element:
    return rs.normal_form(x)


def hilbert(pres: Presentation, grading: str = "length", bound: int = 8) -> dict:
    rs = pres.completed(2 * bound + 2)
    return rs.hilbert(grading, bound)


def is_central(x: Element, pres: Presentation, bound: int = 12) -> bool:
    rs = pres.completed(2 * bound + 2)
    return rs.is_central(x)


REES_VARIABLE = "hbar"


def rees_algebra(pres: Presentation, hname: str = REES_VARIABLE) -> Presentation:
    """Homogenize the presentation by a central variable of degree (0,0,1).

    Each generator's h-degree is raised by its filtration weight; each
    relation is padded with powers of the new variable to make it
    weight-homogeneous.  Specializing the variable to 1 recovers the input,
    to 0 the associated graded.
    """
    if hname in (g.name for g in pres.generators):
        raise ValueError(f"name {hname!r} already in use")
    nlab = max((len(g.labels) for g in pres.generators), default=0)
    gens = [
        Generator(
            g.name,
            g.degree + Degree(0, 0, g.weight),
            weight=g.weight,
            labels=g.labels,
        )
        for g in pres.generators
    ]
    hbar = Generator(hname, Degree(0, 0, 1), weight=1, labels=(0,) * nlab)
    out = Presentation(gens + [hbar])
    hidx = len(gens)
    rels = []
    for r in pres.relations:
        lead = r.leading_word()
        w_lead = pres.word_weight(lead)
        terms = {}
        for w, c in r.terms.items():
            deficit = w_lead - pres.word_weight(w)
            if deficit < 0:
                raise WeightIncompatibleRelation(
                    f"term of weight {pres.word_weight(w)} exceeds leading weight "
                    f"{w_lead} in {r}"
                )
            terms[w + (hidx,) * deficit] = c
        rels.append(Element(out, terms))
    for i in range(len(gens)):
        rels.append(
            Element(out, {(hidx, i): Fraction(1), (i, hidx): Fraction(-1)})
        )
    return Presentation(
        gens + [hbar],
        rels,
        commutation_shortcut=pres.commutation_shortcut,
    )


def specialize(pres: Presentation, name: str, value, undo_weight_shift: bool = False) -> Presentation:
    """Substitute a scalar for one generator in all relations.

    Used for the h=1 and h=0 specializations of a Rees presentation and the
    weight-lambda quotients; relations that collapse to scalars must vanish.
    ``undo_weight_shift`` reverts the h-degree shift applied by rees_algebra
    (the h=1 quotient of a Rees algebra forgets the h-grading).
    """
    value = Fraction(value)
    idx = {g.name: i for i, g in enumerate(pres.generators)}[name]
    keep = [g for g in pres.generators if g.name != name]
    if undo_weight_shift:
        keep = [
            Generator(g.name, g.degree - Degree(0, 0, g.weight), g.weight, g.labels)
            for g in keep
        ]
    out = Presentation(keep)
    remap = {}
    j = 0
    for i, g in enumerate(pres.generators):
        if g.name != name:
            remap[i] = j
            j += 1
    rels = []
    for r in pres.relations:
        terms: dict = {}
        for w, c in r.terms.items():
            n = sum(1 for i in w if i == idx)
            c2 = c * value**n
            if c2:
                nw = tuple(remap[i] for i in w if i != idx)
                terms[nw] = terms.get(nw, Fraction(0)) + c2
        e = Element(out, terms)
        if e and set(e.terms) == {()}:
            raise ValueError(f"specialization turns relation {r} into a unit")
        if e:
            rels.append(e)
    return Presentation(keep, rels, commutation_shortcut=pres.commutation_shortcut)


def associated_graded(pres: Presentation) -> Presentation:
    """Leading-weight parts of the relations; equals Rees followed by h=0."""
    return specialize(rees_algebra(pres), REES_VARIABLE, 0)


# -- file format -------------------------------------------------------------


def presentation_from_dict(data: dict) -> Presentation:
    gens = [
        Generator(
            g["name"],
            Degree(g.get("coh", 0), g.get("s", 0), g.get("h", 0)),
            weight=g.get("weight", 0),
            labels=tuple(g.get("labels", ())),
        )
        for g in data["generators"]
    ]
    return Presentation(
        gens,
        data.get("relations", ()),
        invertible=data.get("invertible", ()),
        commutation_shortcut=data.get("commutation_shortcut", False),
    )


def load_presentation(path) -> Presentation:
    with open(path) as fh:
        return presentation_from_dict(json.load(fh))
