"""Temperley-Lieb category constants and cabled link evaluation."""

import cmath
import math
import os
from fractions import Fraction

import pytest

from kirbycalc.diagram import KirbyDiagram, PlanarCode, TwoHandle, braid_closure_pd
from kirbycalc.errors import MissingPd, ResourceLimit
from kirbycalc.templieb import (
    DEFAULT_SKEIN_CAP,
    TLCategory,
    category_data_tl,
    evaluate_link_tl,
    integer_spin_category,
    integer_spin_functor,
    omega_encircled_value,
    resolve_cap,
    spin_dimensions,
    spin_twists,
    transparency_tl,
)

HALF = Fraction(1, 2)
ONE = Fraction(1)


@pytest.fixture(scope="module")
def cat4():
    return TLCategory(4)


def test_dimensions_r4(cat4):
    dims = spin_dimensions(cat4)
    assert abs(dims[Fraction(0)] - 1) < 1e-9
    assert abs(dims[HALF] - (-math.sqrt(2))) < 1e-9
    assert abs(dims[ONE] - 1) < 1e-9


def test_dimensions_r5_golden_ratio():
    cat = TLCategory(5)
    phi = (1 + math.sqrt(5)) / 2
    dims = spin_dimensions(cat)
    assert abs(abs(dims[HALF]) - phi) < 1e-9
    assert abs(abs(dims[ONE]) - phi) < 1e-9
    assert abs(abs(dims[Fraction(3, 2)]) - 1) < 1e-9


def test_dimensions_r3():
    dims = spin_dimensions(TLCategory(3))
    assert abs(dims[Fraction(0)] - 1) < 1e-9
    assert abs(dims[HALF] - (-1)) < 1e-9


def test_twists_r4(cat4):
    tw = spin_twists(cat4)
    assert abs(tw[Fraction(0)] - 1) < 1e-9
    assert abs(tw[ONE] - (-1)) < 1e-9
    assert abs(tw[HALF] - cmath.exp(-5j * cmath.pi / 8)) < 1e-9


def test_hopf_values_r4(cat4):
    assert abs(cat4.hopf(HALF, HALF)) < 1e-9
    assert abs(cat4.hopf(ONE, ONE) - 1) < 1e-9
    assert abs(cat4.hopf(ONE, HALF) - math.sqrt(2)) < 1e-9
    d = spin_dimensions(cat4)
    assert abs(cat4.hopf(Fraction(0), HALF) - d[Fraction(0)] * d[HALF]) < 1e-9


def test_transparency_r4(cat4):
    # full category: only the unit is transparent (the category is modular)
    assert transparency_tl(cat4, Fraction(0))
    assert not transparency_tl(cat4, HALF)
    assert not transparency_tl(cat4, ONE)
    # within the integer spins both labels are transparent
    ints = [Fraction(0), ONE]
    assert transparency_tl(cat4, Fraction(0), within=ints)
    assert transparency_tl(cat4, ONE, within=ints)


def test_omega_encircled_kills_noninteger_spin(cat4):
    assert abs(omega_encircled_value(cat4, HALF)) < 1e-9
    d = spin_dimensions(cat4)
    qdim = sum(abs(v) ** 2 for v in d.values())
    assert abs(omega_encircled_value(cat4, Fraction(0)) - qdim) < 1e-9


def unknot(framing=0):
    if framing == 0:
        return KirbyDiagram(
            "u", [], [TwoHandle("c", 0)], {}, PlanarCode(crossingless=("c",))
        )
    pd = PlanarCode(
        crossings=((("x", "x", "y", "y", 1) if framing > 0 else ("x", "y", "y", "x", -1)),),
        arcs={"x": "c", "y": "c"},
    )
    return KirbyDiagram("u", [], [TwoHandle("c", framing)], {}, pd)


def test_unknot_values(cat4):
    d = spin_dimensions(cat4)
    tw = spin_twists(cat4)
    for j in cat4.labels:
        assert abs(evaluate_link_tl(cat4, unknot(0), {"c": j}) - d[j]) < 1e-9
        got = evaluate_link_tl(cat4, unknot(1), {"c": j})
        assert abs(got - tw[j] * d[j]) < 1e-9
        got = evaluate_link_tl(cat4, unknot(-1), {"c": j})
        assert abs(got - complex(tw[j]).conjugate() * d[j]) < 1e-9


def test_split_union_multiplies(cat4):
    pd = PlanarCode(crossingless=("a", "b"))
    d = KirbyDiagram("uu", [], [TwoHandle("a", 0), TwoHandle("b", 0)], {}, pd)
    dims = spin_dimensions(cat4)
    for j in cat4.labels:
        for k in cat4.labels:
            got = evaluate_link_tl(cat4, d, {"a": j, "b": k})
            assert abs(got - dims[j] * dims[k]) < 1e-9


def test_width_zero_component_passes_through(cat4):
    # Hopf link with one component labelled 0 behaves like a bare unknot
    pd, _ = braid_closure_pd([1, 1], 2, {1: "u", 2: "v"})
    d = KirbyDiagram(
        "hopf", [], [TwoHandle("u", 0), TwoHandle("v", 0)], {("u", "v"): 1}, pd
    )
    dims = spin_dimensions(cat4)
    for j in cat4.labels:
        got = evaluate_link_tl(cat4, d, {"u": Fraction(0), "v": j})
        assert abs(got - dims[j]) < 1e-9


def test_missing_pd(cat4):
    d = KirbyDiagram("bare", [], [TwoHandle("c", 0)], {})
    with pytest.raises(MissingPd):
        evaluate_link_tl(cat4, d, {"c": HALF})
    empty = KirbyDiagram("S4", [], [], {})
    assert evaluate_link_tl(cat4, empty, {}) == 1


def test_unknown_label_rejected(cat4):
    with pytest.raises(KeyError):
        evaluate_link_tl(cat4, unknot(0), {"c": Fraction(7, 2)})


def test_cap_and_env(cat4, monkeypatch):
    assert resolve_cap(None) == DEFAULT_SKEIN_CAP
    assert resolve_cap(99) == 99
    monkeypatch.setenv("KIRBYCALC_SKEIN_CAP", "7")
    assert resolve_cap(None) == 7
    pd, _ = braid_closure_pd([1, 1, 1], 2, {1: "c", 2: "c"})
    d = KirbyDiagram("t", [], [TwoHandle("c", 3)], {}, pd)
    with pytest.raises(ResourceLimit):
        evaluate_link_tl(cat4, d, {"c": ONE})  # 12 elementary crossings > 7
    monkeypatch.delenv("KIRBYCALC_SKEIN_CAP")
    evaluate_link_tl(cat4, d, {"c": ONE})  # default cap 24 suffices


def test_category_data_face(cat4):
    cd = category_data_tl(cat4)
    assert cd.backend == "templieb"
    assert cd.unit == Fraction(0)
    assert set(cd.labels) == {Fraction(0), HALF, ONE}
    sub = integer_spin_category(cat4)
    assert set(sub.labels) == {Fraction(0), ONE}
    assert sub.is_transparent(ONE)
    f = integer_spin_functor(cat4)
    assert f.validate() == []
