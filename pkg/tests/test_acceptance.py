"""End-to-end acceptance suite.

Each test covers one numbered criterion and prints a single
"criterion N: PASS/FAIL" line (run pytest with -s or -v to see them).
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from kirbycalc import library
from kirbycalc.category import validate_target_category
from kirbycalc.cli import random_diagram
from kirbycalc.diagram import (
    GroupPresentation,
    KirbyDiagram,
    TwoHandle,
    blow_up,
    cancel_12,
    cancel_23,
    connected_sum,
    slide_22,
)
from kirbycalc.engine import (
    InvariantRequest,
    cp2_value,
    cp2bar_value,
    ground_state_dimension,
    group_functor,
    identity_group_functor,
    invariant,
    kirby_direct_invariant,
    predict_simply_connected,
)
from kirbycalc.groups import (
    GroupHomData,
    count_flat_connections,
    hom_invariant,
    s3,
    subgroup,
    z_n,
)
from kirbycalc.pointed import (
    anyonic,
    category_data,
    killing_sum,
    modular_extension,
    pointed_functor,
)
from kirbycalc.skein import bracket, clear_memo, jones_wenzl, naive_bracket, tl_mul
from kirbycalc.templieb import (
    TLCategory,
    build_cabled,
    integer_spin_functor,
    omega_encircled_value,
)

SKEIN_CAP = 40  # largest cabled library diagram has 32 elementary crossings


def report(n, failures):
    status = "FAIL" if failures else "PASS"
    print("criterion %d: %s" % (n, status))
    assert not failures, failures


def value_of(functor, name, **kw):
    return invariant(
        InvariantRequest(functor, library.get(name).diagram, **kw)
    ).value


def z5_functor():
    cd = category_data(anyonic(5))
    return pointed_functor(cd, cd, lambda a: a, "id")


def sign_hom():
    perms = sorted(itertools.permutations(range(3)))
    ident = tuple(range(3))
    elems = [ident] + [p for p in perms if p != ident]

    def parity(p):
        return sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j]) % 2

    return GroupHomData(s3(), z_n(2), tuple(parity(e) for e in elems), "sign")


def test_criterion_1_dijkgraaf_witten_table():
    failures = []
    f = identity_group_functor(s3())
    for name, want in (
        ("S1xS3", 6),
        ("S1xS1xS2", 18),
        ("S1xS3#S1xS3#S2xS2", 36),
        ("S4", 1),
    ):
        got = value_of(f, name)
        if got != want:
            failures.append((name, got, want))
    report(1, failures)


def test_criterion_2_homomorphism_reduction():
    failures = []
    homs = [
        sign_hom(),
        GroupHomData(z_n(4), z_n(2), (0, 1, 0, 1), "mod2"),
    ]
    for phi in homs:
        image = subgroup(phi.target, sorted(set(phi.map)))
        for name in library.names():
            d = library.get(name).diagram
            got = hom_invariant(d, phi)
            want = hom_invariant(
                d, GroupHomData(image, image, tuple(range(image.order)), "id")
            )
            if got != want:
                failures.append((phi.name, name, got, want))
    report(2, failures)


def test_criterion_3_pointed_z5():
    failures = []
    f = z5_functor()
    for name, want in (("S4", 1), ("S1xS3", 5), ("S1xS1xS2", 5), ("S2xS2", 0.2)):
        got = value_of(f, name)
        if abs(got - want) > 1e-9:
            failures.append((name, got, want))
    if abs(abs(cp2_value(f)) ** 2 - 0.2) > 1e-9:
        failures.append(("|cp2|^2", abs(cp2_value(f)) ** 2))
    for name in ("CP2", "CP2bar", "S2xS2", "S4"):
        entry = library.get(name)
        pred = predict_simply_connected(f, entry.chi, entry.sigma)
        got = value_of(f, name)
        if abs(got - pred) > 1e-9:
            failures.append(("predict", name, got, pred))
    report(3, failures)


def test_criterion_4_pointed_z4_and_invalid_targets():
    failures = []
    f = modular_extension(4)
    if abs(value_of(f, "S2xS2") - 0.5) > 1e-9:
        failures.append(("S2xS2", value_of(f, "S2xS2")))
    if abs(value_of(f, "S1xS1xS2") - 8) > 1e-9:
        failures.append(("S1xS1xS2", value_of(f, "S1xS1xS2")))
    for n in (2, 6):
        if validate_target_category(category_data(anyonic(n))).ok:
            failures.append(("Z%d should be rejected" % n,))
    report(4, failures)


def test_criterion_5_killing_sums_exact():
    failures = []
    for n in range(3, 9):
        cat = anyonic(n)
        for a in cat.labels():
            got = killing_sum(cat, a)
            want = n if cat.is_transparent(a) else 0
            if got != want:  # exact integer comparison
                failures.append((n, a, got, want))
    report(5, failures)


def test_criterion_6_move_invariance_suite():
    failures = []
    start = time.time()
    for functor, tol in ((z5_functor(), 1e-9), (identity_group_functor(s3()), 0)):
        plus, minus = cp2_value(functor), cp2bar_value(functor)
        rng = random.Random(0)
        for trial in range(50):  # 50 per backend = 100 diagrams total
            d = random_diagram(rng, "r%d" % trial)
            base = invariant(InvariantRequest(functor, d)).value

            def val(x):
                return invariant(InvariantRequest(functor, x)).value

            checks = []
            if d.h2 >= 2:
                ids = [t.id for t in d.two_handles]
                a, b = rng.sample(ids, 2)
                checks.append(("slide", val(slide_22(d, a, b, 1)), base))
            paired = d.replace(
                one_handles=d.one_handles + ("gx",),
                two_handles=d.two_handles + (TwoHandle("tx", 0, (("gx", 1),)),),
            )
            checks.append(("cancel_12+", val(paired), base))
            checks.append(
                ("cancel_12-", val(cancel_12(paired, "gx", "tx")), base)
            )
            trivial = d.replace(two_handles=d.two_handles + (TwoHandle("tz", 0),))
            checks.append(("cancel_23+", val(trivial), base))
            checks.append(("cancel_23-", val(cancel_23(trivial, "tz")), base))
            checks.append(("blow_up+", val(blow_up(d, 1)), base * plus))
            checks.append(("blow_up-", val(blow_up(d, -1)), base * minus))
            for move, got, want in checks:
                if abs(got - want) > tol:
                    failures.append((functor.target.name, trial, move, got, want))
    elapsed = time.time() - start
    if elapsed > 30:
        failures.append(("runtime", elapsed))
    report(6, failures)


def test_criterion_7_cut_strand_equivalence():
    failures = []
    for n in (5, 7):
        cd = category_data(anyonic(n))
        f = pointed_functor(cd, cd, lambda a: a, "id")
        for name in library.names():
            d = library.get(name).diagram
            slow = invariant(InvariantRequest(f, d)).value
            fast = kirby_direct_invariant(InvariantRequest(f, d))
            if abs(fast - slow) > 1e-9:
                failures.append((n, name, fast, slow))
    report(7, failures)


def test_criterion_8_templieb_r4():
    failures = []
    start = time.time()
    cat = TLCategory(4)
    f = integer_spin_functor(cat)
    for name, want in (("S1xS3", 2), ("S1xS1xS2", 4), ("S4", 1)):
        got = value_of(f, name, skein_cap=SKEIN_CAP)
        if abs(got - want) > 1e-6:
            failures.append((name, got, want))
    if abs(omega_encircled_value(cat, Fraction(1, 2))) > 1e-6:
        failures.append(("encircled spin-1/2", omega_encircled_value(cat, Fraction(1, 2))))
    elapsed = time.time() - start
    if elapsed > 60:
        failures.append(("runtime", elapsed))
    report(8, failures)


def _random_cabled_diagram(rng, max_crossings=8):
    from kirbycalc.diagram import braid_closure_pd

    cat = TLCategory(4)
    while True:
        n = rng.randint(2, 3)
        word = [
            rng.choice([1, -1]) * rng.randint(1, n - 1)
            for _ in range(rng.randint(1, max_crossings))
        ]
        pd, _ = braid_closure_pd(word, n, {i: "c%d" % i for i in range(1, n + 1)})
        widths = {c: rng.choice([1, 1, 2]) for c in pd.components()}
        elementary = sum(
            widths[pd.arcs[a]] * widths[pd.arcs[b]]
            for a, b, _c, _d, _s in pd.crossings
        )
        if elementary <= 14:  # keeps the naive 2^n expansion tractable
            return cat, pd, widths


def test_criterion_9_skein_oracle_equivalence():
    failures = []
    rng = random.Random(20260823)
    for trial in range(50):
        cat, pd, widths = _random_cabled_diagram(rng)
        nodes, wires, free = build_cabled(cat, pd, widths)
        clear_memo()
        fast = bracket(nodes, wires, cat.delta, free_loops=free)
        slow = naive_bracket(nodes, wires, cat.delta, free_loops=free)
        if abs(fast - slow) > 1e-9 * max(1.0, abs(slow)):
            failures.append((trial, fast, slow))
    delta = cat.delta
    for m in (1, 2, 3):
        jw = jones_wenzl(m, delta)
        sq = tl_mul(jw, jw, delta)
        keys = set(jw) | set(sq)
        if any(abs(jw.get(k, 0) - sq.get(k, 0)) > 1e-9 for k in keys):
            failures.append(("JW idempotence", m))
    report(9, failures)


def test_criterion_10_multiplicativity():
    failures = []
    f_group = identity_group_functor(s3())
    f_pointed = z5_functor()
    f_tl = integer_spin_functor(TLCategory(4))
    names = library.names()
    pd_names = [n for n in names if library.get(n).diagram.pd is not None]
    pairs = list(itertools.combinations_with_replacement(names, 2))
    rng = random.Random(1)
    rng.shuffle(pairs)
    pairs = pairs[:20]
    tl_pairs = list(itertools.combinations_with_replacement(pd_names, 2))
    rng.shuffle(tl_pairs)
    tl_pairs = tl_pairs[:20]
    for functor, chosen, tol, cap in (
        (f_group, pairs, 0, None),
        (f_pointed, pairs, 1e-9, None),
        (f_tl, tl_pairs, 1e-6, 200),
    ):
        for a, b in chosen:
            da, db = library.get(a).diagram, library.get(b).diagram
            d = connected_sum(da, db)
            got = invariant(InvariantRequest(functor, d, skein_cap=cap)).value
            want = invariant(
                InvariantRequest(functor, da, skein_cap=cap)
            ).value * invariant(InvariantRequest(functor, db, skein_cap=cap)).value
            if abs(got - want) > tol:
                failures.append((functor.target.name, a, b, got, want))
    report(10, failures)


def test_criterion_11_ground_state_dimensions():
    failures = []
    d = library.get("S1xS1xS2").diagram
    got = ground_state_dimension(identity_group_functor(s3()), d)
    if got != 3:
        failures.append(("Rep(S3)", got))
    # Burnside oracle: conjugation orbits of homs Z -> S3 = conjugacy classes
    if len(s3().conjugacy_classes()) != 3:
        failures.append(("Burnside", len(s3().conjugacy_classes())))
    got = ground_state_dimension(
        integer_spin_functor(TLCategory(4)), d, skein_cap=SKEIN_CAP
    )
    if abs(got - 2) > 1e-6:
        failures.append(("TL r=4", got))
    report(11, failures)
