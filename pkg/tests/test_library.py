"""Built-in diagram library: topology data and expected invariant values."""

import pytest

from kirbycalc import library
from kirbycalc.diagram import euler_characteristic, signature
from kirbycalc.engine import InvariantRequest, identity_group_functor, invariant
from kirbycalc.errors import UnknownManifold
from kirbycalc.groups import s3, z_n
from kirbycalc.pointed import anyonic, category_data, modular_extension, pointed_functor
from kirbycalc.templieb import TLCategory, integer_spin_functor

EXPECTED_TOPOLOGY = {
    "S4": (2, 0),
    "CP2": (3, 1),
    "CP2bar": (3, -1),
    "S2xS2": (4, 0),
    "S2twistS2": (4, 0),
    "S1xS3": (0, 0),
    "S1xS1xS2": (0, 0),
    "IxRP3double": (2, 0),
    "CP2#CP2bar": (4, 0),
    "S1xS3#S1xS3": (-2, 0),
    "S1xS3#S1xS3#S2xS2": (0, 0),
}


def test_names_and_topology():
    assert set(library.names()) == set(EXPECTED_TOPOLOGY)
    for name, (chi, sigma) in EXPECTED_TOPOLOGY.items():
        entry = library.get(name)
        assert entry.chi == chi
        assert entry.sigma == sigma
        assert euler_characteristic(entry.diagram) == chi
        assert signature(entry.diagram) == sigma


def test_unknown_name():
    with pytest.raises(UnknownManifold):
        library.get("K3")


def test_simply_connected_flags():
    sc = {n for n in library.names() if library.get(n).simply_connected}
    assert sc == {"S4", "CP2", "CP2bar", "S2xS2", "S2twistS2", "CP2#CP2bar"}


def functors():
    cd5 = category_data(anyonic(5))
    yield pointed_functor(cd5, cd5, lambda a: a, "id")
    yield modular_extension(4)
    yield identity_group_functor(s3())
    yield identity_group_functor(z_n(4))
    yield integer_spin_functor(TLCategory(4))


def test_expected_values_match_engine():
    for functor in functors():
        for name in library.names():
            entry = library.get(name)
            want = library.expected_value(entry, functor)
            if want is None:
                continue
            if functor.target.backend == "templieb" and entry.diagram.pd is None:
                continue
            res = invariant(InvariantRequest(functor, entry.diagram, skein_cap=40))
            assert abs(res.value - want) < 1e-6, (name, functor.name)


def test_kdf_export_parses_back():
    from kirbycalc.diagram import parse_kdf

    for name in library.names():
        entry = library.get(name)
        text = entry.diagram.to_kdf()
        again = parse_kdf(text)
        assert again.to_kdf() == text
