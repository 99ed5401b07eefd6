"""Finite-group backend: representation categories with trivial braiding.

Invariants here are homomorphism counts.  Groups are plain multiplication
tables over element ids 0..n-1 with 0 the identity; a handful of small
built-ins are provided and arbitrary tables can be loaded from JSON.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .category import CategoryData
from .diagram import KirbyDiagram, fundamental_group
from .errors import SchemaError

_ASSOC_SAMPLES = 10_000


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    table: tuple  # table[a][b] = a*b

    def __post_init__(self):
        n = self.order
        for row in self.table:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise SchemaError("multiplication table of %r is not closed" % self.name)
        if any(self.table[0][a] != a or self.table[a][0] != a for a in range(n)):
            raise SchemaError("element 0 of %r is not an identity" % self.name)
        for a in range(n):
            if all(self.table[a][b] != 0 for b in range(n)):
                raise SchemaError("element %d of %r has no inverse" % (a, self.name))
        if n <= 128:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            triples = (
                tuple(rng.randrange(n) for _ in range(3))
                for _ in range(_ASSOC_SAMPLES)
            )
        for a, b, c in triples:
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise SchemaError("table of %r is not associative" % self.name)

    @property
    def order(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return next(b for b in range(self.order) if self.table[a][b] == 0)

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def conjugacy_classes(self):
        """Classes as sorted tuples, ordered by smallest member (identity first)."""
        seen = set()
        classes = []
        for a in range(self.order):
            if a in seen:
                continue
            orbit = {self.mul(self.mul(g, a), self.inv(g)) for g in range(self.order)}
            seen |= orbit
            classes.append(tuple(sorted(orbit)))
        return classes


@dataclass(frozen=True)
class GroupHomData:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple  # element of source -> element of target
    name: str = "phi"

    def __post_init__(self):
        if len(self.map) != self.source.order:
            raise SchemaError("homomorphism map has wrong length")
        if self.map[0] != 0:
            raise SchemaError("homomorphism does not preserve the identity")
        for a in range(self.source.order):
            for b in range(self.source.order):
                if self.map[self.source.mul(a, b)] != self.target.mul(
                    self.map[a], self.map[b]
                ):
                    raise SchemaError(
                        "%r is not a homomorphism at (%d, %d)" % (self.name, a, b)
                    )

    def kernel_size(self):
        return sum(1 for x in self.map if x == 0)

    def image_elements(self):
        return sorted(set(self.map))


def subgroup(G: FiniteGroup, elements, name=None) -> FiniteGroup:
    """Materialize a subset closed under multiplication as its own group."""
    elems = sorted(set(elements))
    if 0 not in elems:
        raise SchemaError("subgroup must contain the identity")
    index = {g: i for i, g in enumerate(elems)}
    try:
        table = tuple(
            tuple(index[G.mul(a, b)] for b in elems) for a in elems
        )
    except KeyError:
        raise SchemaError("element set is not closed under multiplication") from None
    return FiniteGroup(name or "%s-sub%d" % (G.name, len(elems)), table)


# -- built-ins -----------------------------------------------------------

def _from_mult(name, elems, mult, identity):
    elems = [identity] + [e for e in elems if e != identity]
    index = {e: i for i, e in enumerate(elems)}
    table = tuple(
        tuple(index[mult(a, b)] for b in elems) for a in elems
    )
    return FiniteGroup(name, table)


def z_n(n: int) -> FiniteGroup:
    return FiniteGroup(
        "Z%d" % n, tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    )


def _perm_group(name, degree):
    elems = list(itertools.permutations(range(degree)))

    def mult(p, q):  # (p*q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(degree))

    return _from_mult(name, sorted(elems), mult, tuple(range(degree)))


def s3() -> FiniteGroup:
    return _perm_group("S3", 3)


def d4() -> FiniteGroup:
    """Symmetries of the square, as (rotation mod 4, flip bit)."""
    elems = [(r, f) for f in (0, 1) for r in range(4)]

    def mult(a, b):
        r1, f1 = a
        r2, f2 = b
        # flips conjugate rotations: s r = r^-1 s
        r = (r1 + (r2 if f1 == 0 else -r2)) % 4
        return (r, (f1 + f2) % 2)

    return _from_mult("D4", elems, mult, (0, 0))


def q8() -> FiniteGroup:
    """Quaternion units, encoded as (axis in {1,i,j,k}, sign)."""
    units = ["1", "i", "j", "k"]
    elems = [(u, s) for s in (1, -1) for u in units]
    prod = {
        ("1", "1"): ("1", 1), ("1", "i"): ("i", 1), ("1", "j"): ("j", 1),
        ("1", "k"): ("k", 1), ("i", "1"): ("i", 1), ("j", "1"): ("j", 1),
        ("k", "1"): ("k", 1), ("i", "i"): ("1", -1), ("j", "j"): ("1", -1),
        ("k", "k"): ("1", -1), ("i", "j"): ("k", 1), ("j", "i"): ("k", -1),
        ("j", "k"): ("i", 1), ("k", "j"): ("i", -1), ("k", "i"): ("j", 1),
        ("i", "k"): ("j", -1),
    }

    def mult(a, b):
        u, s = prod[(a[0], b[0])]
        return (u, s * a[1] * b[1])

    return _from_mult("Q8", elems, mult, ("1", 1))


BUILTIN_GROUPS = {
    "S3": s3,
    "D4": d4,
    "Q8": q8,
}


def group_by_name(name: str) -> FiniteGroup:
    if name in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[name]()
    if name.upper().startswith("Z") and name[1:].isdigit():
        return z_n(int(name[1:]))
    raise SchemaError("unknown group %r" % (name,))


def group_from_json(text: str) -> FiniteGroup:
    try:
        doc = json.loads(text)
        return FiniteGroup(str(doc.get("name", "G")), tuple(map(tuple, doc["table"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("malformed group document: %s" % exc) from None


# -- homomorphism counting ------------------------------------------------

def _presentation(diagram_or_presentation):
    if isinstance(diagram_or_presentation, KirbyDiagram):
        return fundamental_group(diagram_or_presentation)
    return diagram_or_presentation


def _evaluate_word(G, word, assignment):
    out = 0
    for gen, sign in word:
        g = assignment[gen]
        out = G.mul(out, g if sign > 0 else G.inv(g))
    return out


def enumerate_homs(presentation, G: FiniteGroup):
    """All relator-satisfying assignments, by backtracking with pruning."""
    gens = list(presentation.generators)
    relators = list(presentation.relators)
    # a relator can be checked once its last-appearing generator is assigned
    checkpoint = {i: [] for i in range(len(gens) + 1)}
    for rel in relators:
        used = {g for g, _ in rel}
        when = max((gens.index(g) + 1 for g in used), default=0)
        checkpoint[when].append(rel)
    out = []

    def recurse(i, assignment):
        for rel in checkpoint[i]:
            if _evaluate_word(G, rel, assignment) != 0:
                return
        if i == len(gens):
            out.append(dict(assignment))
            return
        for g in range(G.order):
            assignment[gens[i]] = g
            recurse(i + 1, assignment)
        del assignment[gens[i]]

    recurse(0, {})
    return out


def count_flat_connections(diagram_or_presentation, G: FiniteGroup) -> int:
    return len(enumerate_homs(_presentation(diagram_or_presentation), G))


def normalized_partition_function(diagram_or_presentation, G: FiniteGroup) -> Fraction:
    return Fraction(count_flat_connections(diagram_or_presentation, G), G.order)


def hom_invariant(diagram_or_presentation, phi: GroupHomData) -> Fraction:
    """Delta-sum over source-group assignments, normalized by the kernel.

    Sums over all P-assignments of the 1-handles and requires every
    relator to map to the identity of the target after applying phi;
    the result is divided by |ker phi|^h1.
    """
    pres = _presentation(diagram_or_presentation)
    gens = list(pres.generators)
    P, G = phi.source, phi.target
    total = 0
    for combo in itertools.product(range(P.order), repeat=len(gens)):
        assignment = {g: phi.map[p] for g, p in zip(gens, combo)}
        if all(_evaluate_word(G, rel, assignment) == 0 for rel in pres.relators):
            total += 1
    return Fraction(total, phi.kernel_size() ** len(gens))


def hom_conjugacy_class_count(presentation, G: FiniteGroup) -> int:
    """Number of homomorphisms up to simultaneous conjugation."""
    homs = enumerate_homs(presentation, G)
    gens = list(presentation.generators)
    keys = {tuple(h[g] for g in gens) for h in homs}
    count = 0
    while keys:
        rep = next(iter(keys))
        orbit = {
            tuple(G.mul(G.mul(c, x), G.inv(c)) for x in rep)
            for c in range(G.order)
        }
        keys -= orbit
        count += 1
    return count


# -- category-model face ---------------------------------------------------

def rep_category(G: FiniteGroup) -> CategoryData:
    """Rep(G) exposed abstractly: labels are conjugacy-class indices.

    Per-label dimensions are never needed (the global dimension is |G|
    and every label is transparent), so no character table is built.
    """
    classes = G.conjugacy_classes()
    inv_class = {}
    for i, cls in enumerate(classes):
        inv_rep = G.inv(cls[0])
        inv_class[i] = next(j for j, c in enumerate(classes) if inv_rep in c)
    return CategoryData(
        name="Rep(%s)" % G.name,
        backend="group",
        labels=list(range(len(classes))),
        unit=0,
        dim=lambda l: 1,  # placeholder, not used by the counting path
        twist=lambda l: 1,
        dual=lambda l: inv_class[l],
        is_transparent=lambda l: True,
        extra={"global_dim": G.order, "group": G},
    )
