"""Built-in certified Kirby diagrams with expected invariant values.

Planar codes are attached only to the entries the skein backend needs;
everything else is stored at the word/linking level.  Expected values
are closed-form expressions over per-functor constants, so one table
serves every backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .category import (
    PivotalFunctorData,
    global_dimension,
)
from .diagram import (
    GroupPresentation,
    KirbyDiagram,
    PlanarCode,
    TwoHandle,
    braid_closure_pd,
    connected_sum,
    euler_characteristic,
    signature,
)
from .errors import UnknownManifold
from .groups import hom_invariant


@dataclass(frozen=True)
class LibraryEntry:
    name: str
    diagram: KirbyDiagram
    chi: int
    sigma: int
    pi1: str
    simply_connected: bool = False
    product_of_S1: bool = False
    interior_pi1: GroupPresentation = None  # pi1(M) for S^1 x M entries
    expected: dict = field(default_factory=dict)

    def __post_init__(self):
        assert euler_characteristic(self.diagram) == self.chi, self.name
        assert signature(self.diagram) == self.sigma, self.name


def _s4():
    return KirbyDiagram("S4", [], [], {}, PlanarCode())


def _cp2(sign):
    pd, _ = braid_closure_pd([sign], 2, {1: "c"})
    name = "CP2" if sign > 0 else "CP2bar"
    return KirbyDiagram(name, [], [TwoHandle("c", sign)], {}, pd)


def _s2xs2():
    pd, _ = braid_closure_pd([1, 1], 2, {1: "u", 2: "v"})
    return KirbyDiagram(
        "S2xS2", [], [TwoHandle("u", 0), TwoHandle("v", 0)], {("u", "v"): 1}, pd
    )


def _s2_twist_s2():
    return KirbyDiagram(
        "S2twistS2", [], [TwoHandle("u", 1), TwoHandle("v", 0)], {("u", "v"): 1}
    )


def _s1xs3():
    return KirbyDiagram("S1xS3", ["g"], [], {}, PlanarCode(crossingless=("g",)))


def _s1xs1xs2():
    """Double of T^2 x D^2: Borromean 2-handle through two dotted circles,
    plus a 0-framed meridian."""
    pd, _ = braid_closure_pd(
        [1, -2, 1, -2, 1, -2, 3, 3], 4, {1: "d1", 2: "d2", 3: "t1", 4: "t2"}
    )
    return KirbyDiagram(
        "S1xS1xS2",
        ["d1", "d2"],
        [
            TwoHandle("t1", 0, (("d1", 1), ("d2", 1), ("d1", -1), ("d2", -1))),
            TwoHandle("t2", 0),
        ],
        {("t1", "t2"): 1},
        pd,
    )


def _ixrp3():
    return KirbyDiagram(
        "IxRP3double", ["g"], [TwoHandle("t", 0, (("g", 1), ("g", 1)))], {}
    )


def _build():
    entries = []

    def add(diagram, chi, sigma, pi1, expected, **kw):
        entries.append(
            LibraryEntry(
                name=diagram.name,
                diagram=diagram,
                chi=chi,
                sigma=sigma,
                pi1=pi1,
                expected=expected,
                **kw,
            )
        )

    one = {"group": "1", "pointed": "1", "templieb": "1"}
    add(_s4(), 2, 0, "trivial", dict(one), simply_connected=True)
    add(
        _cp2(1), 3, 1, "trivial",
        {"group": "1", "pointed": "cp2"},
        simply_connected=True,
    )
    add(
        _cp2(-1), 3, -1, "trivial",
        {"group": "1", "pointed": "cp2bar"},
        simply_connected=True,
    )
    add(
        _s2xs2(), 4, 0, "trivial",
        {"group": "1", "pointed": "qdim_cprime / qdim_c"},
        simply_connected=True,
    )
    add(
        _s2_twist_s2(), 4, 0, "trivial",
        {"group": "1", "pointed": "qdim_cprime / qdim_c"},
        simply_connected=True,
    )
    add(
        _s1xs3(), 0, 0, "Z",
        {"group": "qdim_c", "pointed": "qdim_c", "templieb": "qdim_c"},
        product_of_S1=True,
        interior_pi1=GroupPresentation((), ()),
    )
    add(
        _s1xs1xs2(), 0, 0, "Z^2",
        {
            "group": "lambda_cprime * qdim_c",
            "pointed": "lambda_cprime * qdim_c",
            "templieb": "lambda_cprime * qdim_c",
        },
        product_of_S1=True,
        interior_pi1=GroupPresentation(("a",), ()),
    )
    add(_ixrp3(), 2, 0, "Z/2", {"group": "hom_count"})
    cs = connected_sum(_cp2(1), _cp2(-1))
    add(cs, 4, 0, "trivial",
        {"group": "1", "pointed": "cp2 * cp2bar"},
        simply_connected=True)
    two_tori = connected_sum(_s1xs3(), _s1xs3())
    add(two_tori, -2, 0, "Z * Z",
        {"group": "qdim_c ** 2", "pointed": "qdim_c ** 2"})
    triple = connected_sum(two_tori, _s2xs2())
    add(
        triple, 0, 0, "Z * Z",
        {
            "group": "qdim_c ** 2",
            "pointed": "qdim_c ** 2 * qdim_cprime / qdim_c",
        },
    )
    return {e.name: e for e in entries}


_ENTRIES = _build()


def names():
    return list(_ENTRIES)


def get(name: str) -> LibraryEntry:
    if name not in _ENTRIES:
        raise UnknownManifold(
            "no library diagram %r (have: %s)" % (name, ", ".join(_ENTRIES))
        )
    return _ENTRIES[name]


def expected_value(entry: LibraryEntry, functor: PivotalFunctorData):
    """Evaluate the stored closed form in the functor's constants.

    Returns None when no expectation is recorded for this backend.
    """
    backend = functor.target.backend
    formula = entry.expected.get(backend)
    if formula is None:
        return None
    from .engine import cp2_value, cp2bar_value  # local import, avoids a cycle

    source = functor.source
    transparent = [l for l in source.labels if source.is_transparent(l)]
    constants = {
        "qdim_c": complex(global_dimension(source)),
        "qdim_cprime": sum(
            complex(source.dim(l)) ** 2 for l in transparent
        )
        if backend != "group"
        else complex(len(transparent)),
        "lambda_cprime": complex(len(transparent)),
        "cp2": cp2_value(functor),
        "cp2bar": cp2bar_value(functor),
    }
    if backend == "group":
        constants["hom_count"] = complex(
            hom_invariant(entry.diagram, functor.extra["hom"])
        )
    return complex(eval(formula, {"__builtins__": {}}, constants))
