"""Kirby diagrams in dotted-circle notation.

A diagram is a special framed link: dotted components (1-handles) form a
0-framed unlink, undotted components (2-handles) carry framings, words
through the dotted circles, and pairwise linking numbers.  An optional
planar code pins the full isotopy class for the skein backend.

Conventions for planar codes:
  * a crossing is (a, b, c, d, sign): four arc ids counterclockwise
    starting at the incoming under-strand, so the under-strand runs
    a -> c and the over-strand occupies b and d;
  * sign = +1 when the frame (over-direction, under-direction) is
    positively oriented, which puts the over flow d -> b; sign = -1
    puts it b -> d;
  * framings use the blackboard convention: the writhe of a 2-handle
    component must equal its declared framing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    ConsistencyError,
    DottedLinkError,
    PdPresentError,
    PreconditionFailed,
    SchemaError,
)


@dataclass(frozen=True)
class TwoHandle:
    id: str
    framing: int
    word: tuple = ()  # ((one_handle_id, +1|-1), ...)

    def letter_sum(self, one_id: str) -> int:
        return sum(s for g, s in self.word if g == one_id)


@dataclass(frozen=True)
class PlanarCode:
    crossings: tuple = ()  # ((a, b, c, d, sign), ...)
    arcs: dict = field(default_factory=dict)  # arc id -> component id
    crossingless: tuple = ()  # component ids drawn without crossings

    def components(self):
        return set(self.arcs.values()) | set(self.crossingless)

    def under_component(self, crossing):
        return self.arcs[crossing[0]]

    def over_component(self, crossing):
        return self.arcs[crossing[1]]

    def writhe(self, comp: str) -> int:
        return sum(
            x[4]
            for x in self.crossings
            if self.under_component(x) == comp and self.over_component(x) == comp
        )

    def signed_crossings(self, comp_a: str, comp_b: str) -> int:
        """Sum of signs over crossings between two distinct components."""
        total = 0
        for x in self.crossings:
            pair = {self.under_component(x), self.over_component(x)}
            if pair == {comp_a, comp_b}:
                total += x[4]
        return total

    def linking(self, comp_a: str, comp_b: str) -> Fraction:
        return Fraction(self.signed_crossings(comp_a, comp_b), 2)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relators: tuple  # tuple of words, each ((generator, sign), ...)


def _pair(a: str, b: str):
    return (a, b) if a <= b else (b, a)


class KirbyDiagram:
    """Immutable diagram; all mutating operations return new diagrams."""

    def __init__(self, name, one_handles, two_handles, linking=None, pd=None):
        self.name = name
        self.one_handles = tuple(one_handles)
        self.two_handles = tuple(two_handles)
        self.linking = {}
        for key, v in (linking or {}).items():
            a, b = key if isinstance(key, tuple) else tuple(key.split(","))
            if int(v):
                self.linking[_pair(a, b)] = int(v)
        self.pd = pd
        self._validate()

    # -- basic data ----------------------------------------------------
    @property
    def h1(self):
        return len(self.one_handles)

    @property
    def h2(self):
        return len(self.two_handles)

    def two_handle(self, two_id):
        for t in self.two_handles:
            if t.id == two_id:
                return t
        raise KeyError(two_id)

    def lk(self, a: str, b: str) -> int:
        if a == b:
            return self.two_handle(a).framing
        return self.linking.get(_pair(a, b), 0)

    def linking_matrix(self):
        """Symmetric integer matrix over 2-handles, framings on the diagonal."""
        ids = [t.id for t in self.two_handles]
        return [[self.lk(a, b) for b in ids] for a in ids]

    def extended_matrix(self):
        """Linking form over all components, dotted circles included.

        Dotted circles are 0-framed and mutually unlinked; their linking
        with a 2-handle is the signed letter sum of its word.
        """
        ids = list(self.one_handles) + [t.id for t in self.two_handles]
        n1 = self.h1
        m = [[0] * len(ids) for _ in ids]
        for j, t in enumerate(self.two_handles):
            for i, g in enumerate(self.one_handles):
                m[i][n1 + j] = m[n1 + j][i] = t.letter_sum(g)
        for j, a in enumerate(self.two_handles):
            for k, b in enumerate(self.two_handles):
                m[n1 + j][n1 + k] = self.lk(a.id, b.id)
        return m

    # -- validation ----------------------------------------------------
    def _validate(self):
        ids = list(self.one_handles) + [t.id for t in self.two_handles]
        if len(set(ids)) != len(ids):
            raise SchemaError("duplicate handle ids in %r" % self.name)
        two_ids = {t.id for t in self.two_handles}
        for t in self.two_handles:
            for g, s in t.word:
                if g not in self.one_handles:
                    raise SchemaError(
                        "word of %r references undeclared 1-handle %r" % (t.id, g)
                    )
                if s not in (1, -1):
                    raise SchemaError("bad sign %r in word of %r" % (s, t.id))
        for a, b in self.linking:
            if not ({a, b} <= two_ids):
                raise SchemaError(
                    "linking entry (%s,%s) references a non-2-handle" % (a, b)
                )
        if self.pd is not None:
            self._validate_pd()

    def _validate_pd(self):
        pd = self.pd
        ids = set(self.one_handles) | {t.id for t in self.two_handles}
        if pd.components() != ids:
            raise ConsistencyError(
                "planar code components %r do not match handles %r"
                % (sorted(pd.components()), sorted(ids))
            )
        seen = {}
        for x in pd.crossings:
            if len(x) != 5 or x[4] not in (1, -1):
                raise SchemaError("malformed crossing %r" % (x,))
            a, b, c, d, sign = x
            for arc in (a, b, c, d):
                if arc not in pd.arcs:
                    raise SchemaError("crossing references unknown arc %r" % (arc,))
            if pd.arcs[a] != pd.arcs[c] or pd.arcs[b] != pd.arcs[d]:
                raise ConsistencyError(
                    "crossing %r mixes components along a strand" % (x,)
                )
            inflow = (a, d) if sign > 0 else (a, b)
            outflow = (c, b) if sign > 0 else (c, d)
            for arc in inflow:
                seen.setdefault(arc, []).append("in")
            for arc in outflow:
                seen.setdefault(arc, []).append("out")
        for arc in pd.arcs:
            roles = sorted(seen.get(arc, []))
            if roles != ["in", "out"]:
                raise ConsistencyError(
                    "arc %r has endpoint roles %r (want one in, one out)" % (arc, roles)
                )
        for comp in pd.crossingless:
            if comp in pd.arcs.values():
                raise ConsistencyError("crossingless component %r has arcs" % (comp,))
        # dotted sublink must be a 0-framed unlink
        for g in self.one_handles:
            if pd.writhe(g) != 0 or any(
                pd.under_component(x) == g and pd.over_component(x) == g
                for x in pd.crossings
            ):
                raise DottedLinkError("dotted circle %r has self-crossings" % (g,))
        for i, g in enumerate(self.one_handles):
            for h in self.one_handles[i + 1 :]:
                if pd.linking(g, h) != 0:
                    raise DottedLinkError(
                        "dotted circles %r and %r are linked" % (g, h)
                    )
        # framings, linkings and words against the drawing
        for t in self.two_handles:
            if pd.writhe(t.id) != t.framing:
                raise ConsistencyError(
                    "writhe %d of %r does not equal framing %d"
                    % (pd.writhe(t.id), t.id, t.framing)
                )
            for g in self.one_handles:
                if pd.linking(t.id, g) != t.letter_sum(g):
                    raise ConsistencyError(
                        "drawn linking of %r with dotted %r is %s, word gives %d"
                        % (t.id, g, pd.linking(t.id, g), t.letter_sum(g))
                    )
        for i, a in enumerate(self.two_handles):
            for b in self.two_handles[i + 1 :]:
                drawn = pd.linking(a.id, b.id)
                if drawn != self.lk(a.id, b.id):
                    raise ConsistencyError(
                        "drawn linking lk(%s,%s)=%s contradicts declared %d"
                        % (a.id, b.id, drawn, self.lk(a.id, b.id))
                    )

    # -- serialization -------------------------------------------------
    def to_kdf(self) -> str:
        doc = {
            "name": self.name,
            "one_handles": list(self.one_handles),
            "two_handles": [
                {"id": t.id, "framing": t.framing, "word": [list(l) for l in t.word]}
                for t in self.two_handles
            ],
            "linking": {
                "%s,%s" % key: v for key, v in sorted(self.linking.items())
            },
        }
        if self.pd is not None:
            doc["pd"] = {
                "crossings": [list(x) for x in self.pd.crossings],
                "arcs": dict(sorted(self.pd.arcs.items())),
                "crossingless": sorted(self.pd.crossingless),
            }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def replace(self, **kw):
        data = dict(
            name=self.name,
            one_handles=self.one_handles,
            two_handles=self.two_handles,
            linking=self.linking,
            pd=self.pd,
        )
        data.update(kw)
        return KirbyDiagram(**data)


def parse_kdf(document: str) -> KirbyDiagram:
    """Parse and fully validate a KDF JSON document."""
    try:
        doc = json.loads(document) if document.strip() else {}
    except json.JSONDecodeError as exc:
        raise SchemaError("not valid JSON: %s" % exc) from None
    if not isinstance(doc, dict):
        raise SchemaError("KDF document must be a JSON object")
    try:
        twos = tuple(
            TwoHandle(
                id=str(t["id"]),
                framing=int(t.get("framing", 0)),
                word=tuple((str(g), int(s)) for g, s in t.get("word", [])),
            )
            for t in doc.get("two_handles", [])
        )
        pd = None
        if "pd" in doc:
            p = doc["pd"]
            pd = PlanarCode(
                crossings=tuple(tuple(x) for x in p.get("crossings", [])),
                arcs={str(k): str(v) for k, v in p.get("arcs", {}).items()},
                crossingless=tuple(p.get("crossingless", [])),
            )
        return KirbyDiagram(
            name=str(doc.get("name", "diagram")),
            one_handles=tuple(str(g) for g in doc.get("one_handles", [])),
            two_handles=twos,
            linking=doc.get("linking", {}),
            pd=pd,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("malformed KDF document: %s" % exc) from None


# -- derived topology ---------------------------------------------------

def fundamental_group(diagram: KirbyDiagram) -> GroupPresentation:
    """1-handles give generators, 2-handle words give relators, verbatim."""
    return GroupPresentation(
        generators=tuple(diagram.one_handles),
        relators=tuple(t.word for t in diagram.two_handles),
    )


def _rank(matrix) -> int:
    """Rank over the rationals by exact Gaussian elimination."""
    m = [[Fraction(v) for v in row] for row in matrix]
    rank = 0
    cols = len(m[0]) if m else 0
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def euler_characteristic(diagram: KirbyDiagram) -> int:
    """2 - h1 + h2 - h3 for the closed manifold.

    The number of 3-handles is forced by closedness: it equals the
    first Betti number of the boundary of the 1-/2-handlebody, which is
    the rational nullity of the linking form extended over all
    components (dotted circles as 0-framed components whose linkings
    with the 2-handles are the word letter sums).  With no 2-handles
    this degenerates to h3 = h1, and with no 1-handles to the nullity
    of the plain linking matrix.
    """
    m = diagram.extended_matrix()
    h3 = (diagram.h1 + diagram.h2) - _rank(m)
    return 2 - diagram.h1 + diagram.h2 - h3


def signature(diagram: KirbyDiagram) -> int:
    """Signature of the 2-handle linking matrix, computed exactly."""
    m = [[Fraction(v) for v in row] for row in diagram.linking_matrix()]
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        # prefer a nonzero diagonal pivot; otherwise symmetrize one in
        i = next((i for i in active if m[i][i] != 0), None)
        if i is None:
            found = None
            for a in active:
                for b in active:
                    if a != b and m[a][b] != 0:
                        found = (a, b)
                        break
                if found:
                    break
            if found is None:
                break  # remaining block is zero
            a, b = found
            for j in range(n):
                m[a][j] += m[b][j]
            for j in range(n):
                m[j][a] += m[j][b]
            i = a
        if m[i][i] > 0:
            pos += 1
        else:
            neg += 1
        piv = m[i][i]
        active.remove(i)
        for r in active:
            f = m[r][i] / piv
            if f != 0:
                for j in range(n):
                    m[r][j] -= f * m[i][j]
                for j in range(n):
                    m[j][r] -= f * m[j][i]
    return pos - neg


# -- handle moves --------------------------------------------------------

def _invert_word(word):
    return tuple((g, -s) for g, s in reversed(word))


def cancel_12(diagram: KirbyDiagram, one_id: str, two_id: str) -> KirbyDiagram:
    """Remove a cancelling 1-/2-handle pair."""
    if one_id not in diagram.one_handles:
        raise PreconditionFailed("no 1-handle %r" % (one_id,))
    t = diagram.two_handle(two_id)
    if len(t.word) != 1 or t.word[0][0] != one_id:
        raise PreconditionFailed(
            "word of %r is not a single letter at %r" % (two_id, one_id)
        )
    for other in diagram.two_handles:
        if other.id != two_id and any(g == one_id for g, _ in other.word):
            raise PreconditionFailed(
                "1-handle %r also occurs in the word of %r" % (one_id, other.id)
            )
    for other in diagram.two_handles:
        if other.id != two_id and diagram.lk(two_id, other.id) != 0:
            raise PreconditionFailed(
                "2-handle %r is linked with %r" % (two_id, other.id)
            )
    pd = diagram.pd
    if pd is not None:
        gone = {one_id, two_id}
        keep = []
        for x in pd.crossings:
            members = {pd.under_component(x), pd.over_component(x)}
            if members & gone:
                if not members <= gone:
                    raise PreconditionFailed(
                        "cancelling pair crosses other components in the drawing"
                    )
            else:
                keep.append(x)
        pd = PlanarCode(
            crossings=tuple(keep),
            arcs={a: c for a, c in pd.arcs.items() if c not in gone},
            crossingless=tuple(c for c in pd.crossingless if c not in gone),
        )
    return diagram.replace(
        one_handles=tuple(g for g in diagram.one_handles if g != one_id),
        two_handles=tuple(t for t in diagram.two_handles if t.id != two_id),
        linking={k: v for k, v in diagram.linking.items() if two_id not in k},
        pd=pd,
    )


def cancel_23(diagram: KirbyDiagram, two_id: str) -> KirbyDiagram:
    """Remove an unknotted, unlinked, 0-framed 2-handle with empty word."""
    t = diagram.two_handle(two_id)
    if t.word:
        raise PreconditionFailed("word of %r is not empty" % (two_id,))
    if t.framing != 0:
        raise PreconditionFailed("framing of %r is %d, not 0" % (two_id, t.framing))
    for other in diagram.two_handles:
        if other.id != two_id and diagram.lk(two_id, other.id) != 0:
            raise PreconditionFailed("%r is linked with %r" % (two_id, other.id))
    pd = diagram.pd
    if pd is not None:
        if two_id not in pd.crossingless:
            raise PreconditionFailed("%r has crossings in the drawing" % (two_id,))
        pd = PlanarCode(
            crossings=pd.crossings,
            arcs=dict(pd.arcs),
            crossingless=tuple(c for c in pd.crossingless if c != two_id),
        )
    return diagram.replace(
        two_handles=tuple(t for t in diagram.two_handles if t.id != two_id),
        linking={k: v for k, v in diagram.linking.items() if two_id not in k},
        pd=pd,
    )


def blow_up(diagram: KirbyDiagram, sign: int) -> KirbyDiagram:
    """Connected-sum a single (+/-1)-framed unknotted 2-handle in."""
    if sign not in (1, -1):
        raise PreconditionFailed("blow-up sign must be +1 or -1")
    base = "e"
    k = 1
    existing = set(diagram.one_handles) | {t.id for t in diagram.two_handles}
    while "%s%d" % (base, k) in existing:
        k += 1
    new_id = "%s%d" % (base, k)
    pd = diagram.pd
    if pd is not None:
        ax, ay = "%s.x" % new_id, "%s.y" % new_id
        if sign > 0:
            crossing = (ax, ax, ay, ay, 1)
        else:
            crossing = (ax, ay, ay, ax, -1)
        pd = PlanarCode(
            crossings=pd.crossings + (crossing,),
            arcs={**pd.arcs, ax: new_id, ay: new_id},
            crossingless=pd.crossingless,
        )
    return diagram.replace(
        two_handles=diagram.two_handles + (TwoHandle(new_id, sign),),
        pd=pd,
    )


def slide_22(diagram: KirbyDiagram, a: str, b: str, sign: int) -> KirbyDiagram:
    """Slide 2-handle a over 2-handle b (word/linking level only)."""
    if diagram.pd is not None:
        raise PdPresentError(
            "handle slides are not implemented on planar codes; "
            "drop the pd first"
        )
    if a == b:
        raise PreconditionFailed("cannot slide a handle over itself")
    if sign not in (1, -1):
        raise PreconditionFailed("slide sign must be +1 or -1")
    ta, tb = diagram.two_handle(a), diagram.two_handle(b)
    word = ta.word + (tb.word if sign > 0 else _invert_word(tb.word))
    framing = ta.framing + tb.framing + 2 * sign * diagram.lk(a, b)
    linking = dict(diagram.linking)
    for other in diagram.two_handles:
        if other.id in (a, b):
            continue
        v = diagram.lk(a, other.id) + sign * diagram.lk(b, other.id)
        key = _pair(a, other.id)
        if v:
            linking[key] = v
        else:
            linking.pop(key, None)
    v = diagram.lk(a, b) + sign * tb.framing
    key = _pair(a, b)
    if v:
        linking[key] = v
    else:
        linking.pop(key, None)
    twos = tuple(
        TwoHandle(a, framing, word) if t.id == a else t for t in diagram.two_handles
    )
    return diagram.replace(two_handles=twos, linking=linking)


def connected_sum(a: KirbyDiagram, b: KirbyDiagram) -> KirbyDiagram:
    """Disjoint union of diagrams; ids from b are renamed on collision."""
    used = set(a.one_handles) | {t.id for t in a.two_handles}

    def rename(x):
        y = x
        while y in used:
            y = y + "'"
        return y

    b_map = {}
    for g in b.one_handles:
        b_map[g] = rename(g)
        used.add(b_map[g])
    for t in b.two_handles:
        b_map[t.id] = rename(t.id)
        used.add(b_map[t.id])

    twos = a.two_handles + tuple(
        TwoHandle(b_map[t.id], t.framing, tuple((b_map[g], s) for g, s in t.word))
        for t in b.two_handles
    )
    linking = dict(a.linking)
    for (x, y), v in b.linking.items():
        linking[_pair(b_map[x], b_map[y])] = v
    pd = None
    if a.pd is not None and b.pd is not None:
        b_arcs = {"b." + arc: b_map[c] for arc, c in b.pd.arcs.items()}
        b_x = tuple(
            ("b." + x[0], "b." + x[1], "b." + x[2], "b." + x[3], x[4])
            for x in b.pd.crossings
        )
        pd = PlanarCode(
            crossings=a.pd.crossings + b_x,
            arcs={**a.pd.arcs, **b_arcs},
            crossingless=a.pd.crossingless
            + tuple(b_map[c] for c in b.pd.crossingless),
        )
    return KirbyDiagram(
        name="%s#%s" % (a.name, b.name),
        one_handles=a.one_handles + tuple(b_map[g] for g in b.one_handles),
        two_handles=twos,
        linking=linking,
        pd=pd,
    )


# -- planar-code construction --------------------------------------------

def braid_closure_pd(word, n_strands, component_names):
    """Planar code of a braid closure.

    ``word`` is a list of nonzero integers: +i is the positive crossing
    where the strand at position i passes over position i+1, -i its
    inverse.  ``component_names`` maps each closure component (keyed by
    its smallest participating strand position, 1-based) to an id.
    Returns (PlanarCode, strand position -> component id).
    """
    cur = {p: "s%d" % p for p in range(1, n_strands + 1)}
    strand_at = {p: p for p in range(1, n_strands + 1)}
    strand_of_arc = {cur[p]: p for p in cur}
    crossings = []
    counter = 0
    for letter in word:
        i = abs(letter)
        if not 1 <= i < n_strands:
            raise SchemaError("braid letter %d out of range" % letter)
        bl, br = cur[i], cur[i + 1]
        tl, tr = "a%d" % counter, "a%d" % (counter + 1)
        counter += 2
        if letter > 0:
            crossings.append((br, tr, tl, bl, 1))
            strand_of_arc[tr] = strand_at[i]  # over strand moves i -> i+1
            strand_of_arc[tl] = strand_at[i + 1]
        else:
            crossings.append((bl, br, tr, tl, -1))
            strand_of_arc[tr] = strand_at[i]  # under strand moves i -> i+1
            strand_of_arc[tl] = strand_at[i + 1]
        cur[i], cur[i + 1] = tl, tr
        strand_at[i], strand_at[i + 1] = strand_at[i + 1], strand_at[i]

    # closure components: strand s ends at some position p and continues
    # as the strand that started at p
    end_pos = {strand_at[p]: p for p in strand_at}
    comp_of_strand = {}
    for s in range(1, n_strands + 1):
        if s in comp_of_strand:
            continue
        cycle = [s]
        nxt = end_pos[s]
        while nxt != s:
            cycle.append(nxt)
            nxt = end_pos[nxt]
        name = component_names[min(cycle)]
        for m in cycle:
            comp_of_strand[m] = name

    # identify each final arc with the initial arc of its position
    subst = {}
    crossingless = []
    for p in range(1, n_strands + 1):
        start, final = "s%d" % p, cur[p]
        if final == start:
            crossingless.append(comp_of_strand[p])
        else:
            subst[final] = start

    def sub(arc):
        return subst.get(arc, arc)

    crossings = tuple(
        (sub(a), sub(b), sub(c), sub(d), s) for a, b, c, d, s in crossings
    )
    arcs = {}
    for arc, s in strand_of_arc.items():
        if arc in subst:
            continue  # renamed away
        if arc.startswith("s") and comp_of_strand[int(arc[1:])] in crossingless:
            continue
        arcs[arc] = comp_of_strand[s]
    pd = PlanarCode(
        crossings=crossings, arcs=arcs, crossingless=tuple(sorted(set(crossingless)))
    )
    return pd, comp_of_strand
