"""Temperley-Lieb backend at q = e^{i pi / r}.

Labels are spins j in {0, 1/2, ..., (r-2)/2}.  A component labelled j is
replaced by a 2j-strand cable carrying one Jones-Wenzl box, and the
resulting diagram is evaluated by the Kauffman bracket.  All category
constants (dimensions, twists, transparency) are derived from that same
evaluator, so conventions cannot drift apart.

Cabling geometry: at a crossing the under cable runs south to north
(copy 1 on the west) and the over cable runs horizontally; a positive
crossing's over cable flows west to east (copy 1 on the north), a
negative one east to west (copy 1 on the south).  Parallel transport
between crossings preserves the copy order, so all gluings are
copy-to-copy.
"""

from __future__ import annotations

import cmath
import os
from fractions import Fraction

from .category import CategoryData, Colour, PivotalFunctorData
from .diagram import KirbyDiagram, PlanarCode, TwoHandle, braid_closure_pd
from .errors import MissingPd, ZeroDimension
from .skein import bracket, box_node, chebyshev_delta, crossing_node

_TOL = 1e-9
DEFAULT_SKEIN_CAP = 24


def resolve_cap(cap=None):
    if cap is not None:
        return cap
    env = os.environ.get("KIRBYCALC_SKEIN_CAP")
    return int(env) if env else DEFAULT_SKEIN_CAP


class TLCategory:
    def __init__(self, r: int):
        if r < 3:
            raise ValueError("need r >= 3")
        self.r = r
        self.A = cmath.exp(1j * cmath.pi / (2 * r))
        self.delta = -self.A**2 - self.A**-2
        self.labels = [Fraction(k, 2) for k in range(r - 1)]
        self.dims = {j: self._dimension(j) for j in self.labels}
        self.twists = {j: self._twist(j) for j in self.labels}
        self._hopf_cache = {}

    def width(self, j) -> int:
        return int(2 * j)

    def _dimension(self, j):
        d = KirbyDiagram("unknot", [], [TwoHandle("c", 0)], {},
                         PlanarCode(crossingless=("c",)))
        return evaluate_link_tl(self, d, {"c": j}, cap=None)

    def _twist(self, j):
        dim = self.dims[j]
        if abs(dim) < _TOL:
            raise ZeroDimension("spin %s has vanishing dimension" % (j,))
        kink = KirbyDiagram(
            "kink",
            [],
            [TwoHandle("c", 1)],
            {},
            PlanarCode(crossings=(("x", "x", "y", "y", 1),), arcs={"x": "c", "y": "c"}),
        )
        return evaluate_link_tl(self, kink, {"c": j}, cap=None) / dim

    def hopf(self, j, k):
        """Evaluation of the 0-framed Hopf link coloured (j, k)."""
        key = (min(j, k), max(j, k))
        if key not in self._hopf_cache:
            pd, _ = braid_closure_pd([1, 1], 2, {1: "u", 2: "v"})
            d = KirbyDiagram(
                "hopf", [], [TwoHandle("u", 0), TwoHandle("v", 0)], {("u", "v"): 1}, pd
            )
            self._hopf_cache[key] = evaluate_link_tl(
                self, d, {"u": key[0], "v": key[1]}, cap=None
            )
        return self._hopf_cache[key]


def spin_dimensions(cat: TLCategory):
    return dict(cat.dims)


def spin_twists(cat: TLCategory):
    return dict(cat.twists)


def transparency_tl(cat: TLCategory, j, within=None) -> bool:
    """Monodromy criterion: Hopf(j, k) = d_j d_k for all k in the ambient set."""
    others = cat.labels if within is None else within
    return all(
        abs(cat.hopf(j, k) - cat.dims[j] * cat.dims[k]) < _TOL for k in others
    )


# -- cabled evaluation -------------------------------------------------------

def _passes(pd: PlanarCode):
    """Travel-ordered crossing passes per component.

    Returns {component: [(crossing index, 'under'|'over'), ...]} following
    the orientation, starting from the lexicographically smallest arc.
    """
    inflow = {}
    outflow_arc = {}
    for idx, (a, b, c, d, sign) in enumerate(pd.crossings):
        over_in, over_out = (d, b) if sign > 0 else (b, d)
        inflow[a] = (idx, "under")
        inflow[over_in] = (idx, "over")
        outflow_arc[(idx, "under")] = c
        outflow_arc[(idx, "over")] = over_out
    comps = {}
    for comp in sorted(set(pd.arcs.values())):
        start = min(a for a, c in pd.arcs.items() if c == comp)
        seq = []
        arc = start
        while True:
            where = inflow[arc]
            seq.append(where)
            arc = outflow_arc[where]
            if arc == start:
                break
        comps[comp] = seq
    return comps


def build_cabled(cat: TLCategory, pd: PlanarCode, widths):
    """Nodes, wires and free loop count of the cabled diagram.

    ``widths`` maps components to cable widths; width-0 components vanish
    (their crossings with anything are required to be absent from the
    effective diagram, which holds because a 0-strand cable smooths away:
    the partner cable's wires pass straight through).
    """
    nodes = []
    wires = []
    free_loops = 0
    passes = _passes(pd)

    def under_ports(idx, u, o, edge):
        k = 1 if edge == "in" else o
        side = "S" if edge == "in" else "N"
        return [("x", idx, i, k, side) for i in range(1, u + 1)]

    def over_ports(idx, u, o, sign, edge):
        entry_west = sign > 0
        west = (edge == "in") == entry_west
        i = 1 if west else u
        side = "W" if west else "E"
        if sign > 0:
            rows = [o + 1 - c for c in range(1, o + 1)]
        else:
            rows = list(range(1, o + 1))
        return [("x", idx, i, k, side) for k in rows]

    # elementary crossings and their internal wiring
    eff_width = {}
    for idx, (a, b, c, d, sign) in enumerate(pd.crossings):
        u = widths[pd.arcs[a]]
        o = widths[pd.arcs[b]]
        eff_width[idx] = (u, o)
        if u == 0 or o == 0:
            continue
        for i in range(1, u + 1):
            for k in range(1, o + 1):
                ports = (
                    ("x", idx, i, k, "S"),
                    ("x", idx, i, k, "E"),
                    ("x", idx, i, k, "N"),
                    ("x", idx, i, k, "W"),
                )
                nodes.append(crossing_node(ports, cat.A))
        for i in range(1, u + 1):
            for k in range(1, o):
                wires.append((("x", idx, i, k, "N"), ("x", idx, i, k + 1, "S")))
        for i in range(1, u):
            for k in range(1, o + 1):
                wires.append((("x", idx, i, k, "E"), ("x", idx, i + 1, k, "W")))

    for comp in sorted(set(pd.arcs.values()) | set(pd.crossingless)):
        m = widths[comp]
        if m == 0:
            continue
        bottom = [("box", comp, "b", i) for i in range(1, m + 1)]
        top = [("box", comp, "t", i) for i in range(1, m + 1)]
        nodes.append(box_node(tuple(bottom), tuple(top), cat.delta))
        current = top
        for idx, role in passes.get(comp, []):
            u, o = eff_width[idx]
            sign = pd.crossings[idx][4]
            if role == "under":
                if o == 0:  # the over cable vanished; pass straight through
                    continue
                entry = under_ports(idx, u, o, "in")
                exit_ = under_ports(idx, u, o, "out")
            else:
                if u == 0:
                    continue
                entry = over_ports(idx, u, o, sign, "in")
                exit_ = over_ports(idx, u, o, sign, "out")
            for cur, ent in zip(current, entry):
                wires.append((cur, ent))
            current = exit_
        for cur, bot in zip(current, bottom):
            wires.append((cur, bot))
    return nodes, wires, free_loops


def evaluate_link_tl(cat: TLCategory, diagram: KirbyDiagram, labels, cap=None):
    """Bracket of the diagram with each component cabled by its spin label."""
    if diagram.pd is None:
        if not diagram.one_handles and not diagram.two_handles:
            return 1 + 0j
        raise MissingPd("Temperley-Lieb evaluation needs a planar code")
    widths = {}
    for comp in sorted(diagram.pd.components()):
        j = labels[comp]
        if j not in cat.labels:
            raise KeyError("label %r is not a spin of the category" % (j,))
        widths[comp] = cat.width(j)
    nodes, wires, free_loops = build_cabled(cat, diagram.pd, widths)
    return bracket(
        nodes, wires, cat.delta, free_loops=free_loops, cap=resolve_cap(cap)
    )


def omega_encircled_value(cat: TLCategory, j):
    """Strand of spin j encircled by the full Kirby colour."""
    return sum(cat.dims[k] * cat.hopf(j, k) for k in cat.labels)


# -- category-model face ------------------------------------------------------

def category_data_tl(cat: TLCategory) -> CategoryData:
    return CategoryData(
        name="TL(r=%d)" % cat.r,
        backend="templieb",
        labels=list(cat.labels),
        unit=Fraction(0),
        dim=lambda j: cat.dims[j],
        twist=lambda j: cat.twists[j],
        dual=lambda j: j,
        is_transparent=lambda j: transparency_tl(cat, j),
        evaluator=lambda diagram, labels, cap=None: evaluate_link_tl(
            cat, diagram, labels, cap=cap
        ),
        extra={"tl": cat},
    )


def integer_spin_category(cat: TLCategory) -> CategoryData:
    """The spherical subcategory of integer spins, with its own centre."""
    ints = [j for j in cat.labels if j.denominator == 1]
    return CategoryData(
        name="TL(r=%d)-integer" % cat.r,
        backend="templieb",
        labels=ints,
        unit=Fraction(0),
        dim=lambda j: cat.dims[j],
        twist=lambda j: cat.twists[j],
        dual=lambda j: j,
        is_transparent=lambda j: transparency_tl(cat, j, within=ints),
        evaluator=lambda diagram, labels, cap=None: evaluate_link_tl(
            cat, diagram, labels, cap=cap
        ),
        extra={"tl": cat},
    )


def integer_spin_functor(cat: TLCategory) -> PivotalFunctorData:
    source = integer_spin_category(cat)
    target = category_data_tl(cat)
    return PivotalFunctorData(
        source=source,
        target=target,
        image={j: Colour({j: 1}) for j in source.labels},
        name="integer-spins",
    )
