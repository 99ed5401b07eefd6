"""Abstract premodular-category data shared by every backend.

A backend supplies its simple labels together with dimensions, twists,
duality, a transparency oracle and (where available) a framed-link
evaluator.  On top of that this module provides colours (formal linear
combinations of labels), Kirby colours, transparent parts, target
validation and functor application.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import NonPositiveGlobalDimension

TOL = 1e-9


def _label_key(label):
    # Canonical sort key so Colour iteration and serialization are stable.
    return (str(type(label).__name__), repr(label))


class Colour:
    """Sparse formal complex-linear combination of simple labels."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for label, c in dict(coeffs).items():
                if c != 0:
                    self.coeffs[label] = complex(c)

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: _label_key(kv[0]))

    def support(self):
        return [label for label, _ in self.items()]

    def __getitem__(self, label):
        return self.coeffs.get(label, 0j)

    def __add__(self, other):
        out = dict(self.coeffs)
        for label, c in other.coeffs.items():
            out[label] = out.get(label, 0j) + c
        return Colour(out)

    def scale(self, s):
        return Colour({label: s * c for label, c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, Colour):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self[k] - other[k]) <= TOL for k in keys)

    def __repr__(self):
        terms = ", ".join("%r: %s" % (label, c) for label, c in self.items())
        return "Colour({%s})" % terms


@dataclass
class CategoryData:
    """A premodular category, presented through callables per label.

    ``evaluator(diagram, labels) -> complex`` evaluates a fully labelled
    framed link; backends that compute invariants by other means (the
    counting backend) leave it as None.
    """

    name: str
    backend: str
    labels: list
    unit: object
    dim: Callable
    twist: Callable
    dual: Callable
    is_transparent: Callable
    evaluator: Optional[Callable] = None
    fusion: Optional[Callable] = None  # label x label -> label, if the backend has one
    extra: dict = field(default_factory=dict)

    def colour(self, mapping):
        return Colour(mapping)


@dataclass
class PivotalFunctorData:
    """A pivotal functor presented by its action on simple labels.

    ``image`` maps each source label to a Colour over the target with
    nonnegative-integer coefficients.  Monoidal coherences are not
    modelled; functors differing only there give the same invariant.
    """

    source: CategoryData
    target: CategoryData
    image: dict
    name: str = "functor"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for label, col in self.image.items():
            if not isinstance(col, Colour):
                self.image[label] = Colour(col)

    def validate(self):
        problems = []
        img_unit = self.image.get(self.source.unit)
        if img_unit is None or not (
            abs(img_unit[self.target.unit] - 1) <= TOL
            and all(
                abs(c) <= TOL
                for lbl, c in img_unit.coeffs.items()
                if lbl != self.target.unit
            )
        ):
            problems.append("unit is not mapped to the target unit")
        for label in self.source.labels:
            col = self.image.get(label)
            if col is None:
                problems.append("label %r has no image" % (label,))
                continue
            want = complex(self.source.dim(label))
            got = sum(c * complex(self.target.dim(y)) for y, c in col.items())
            if abs(want - got) > 1e-6:
                problems.append(
                    "dimension not preserved on %r: %s vs %s" % (label, want, got)
                )
        return problems


@dataclass
class ValidationReport:
    category: str
    problems: list
    modular: bool = False

    @property
    def ok(self):
        return not self.problems


def kirby_colour(cat: CategoryData) -> Colour:
    """Formal sum of all simple labels weighted by their dimensions."""
    return Colour({label: complex(cat.dim(label)) for label in cat.labels})


def global_dimension(cat: CategoryData) -> complex:
    """Sum of squared dimensions; asserted to be a positive real."""
    if "global_dim" in cat.extra:  # backends without per-label dims (counting)
        total = complex(cat.extra["global_dim"])
    else:
        total = sum(complex(cat.dim(label)) ** 2 for label in cat.labels)
    if abs(total.imag) > TOL or total.real <= TOL:
        raise NonPositiveGlobalDimension(
            "global dimension %s of %s is not a positive real" % (total, cat.name)
        )
    return complex(total.real)


def transparent_part(cat: CategoryData, colour: Colour) -> Colour:
    """Project a colour onto the transparent labels."""
    return Colour(
        {l: c for l, c in colour.coeffs.items() if cat.is_transparent(l)}
    )


def colour_dimension(cat: CategoryData, colour: Colour) -> complex:
    return sum(c * complex(cat.dim(label)) for label, c in colour.items())


def validate_target_category(cat: CategoryData) -> ValidationReport:
    """Check the axioms a category must satisfy to act as a target."""
    problems = []
    if "global_dim" not in cat.extra:
        try:
            global_dimension(cat)
        except NonPositiveGlobalDimension as exc:
            problems.append(str(exc))
        if abs(complex(cat.dim(cat.unit)) - 1) > TOL:
            problems.append("dim(unit) != 1")
        if abs(complex(cat.twist(cat.unit)) - 1) > TOL:
            problems.append("twist(unit) != 1")
        transparent = []
        for label in cat.labels:
            if cat.dual(cat.dual(label)) != label:
                problems.append("dual is not an involution at %r" % (label,))
            if abs(complex(cat.dim(cat.dual(label))) - complex(cat.dim(label))) > TOL:
                problems.append("dim(dual) != dim at %r" % (label,))
            if abs(complex(cat.twist(cat.dual(label))) - complex(cat.twist(label))) > TOL:
                problems.append("twist(dual) != twist at %r" % (label,))
            if cat.is_transparent(label):
                transparent.append(label)
                if abs(complex(cat.twist(label)) - 1) > TOL:
                    problems.append(
                        "transparent label %r has nontrivial twist %s"
                        % (label, complex(cat.twist(label)))
                    )
        modular = transparent == [cat.unit]
    else:
        # Counting backend: symmetric with trivial twists, always a valid target.
        modular = len(cat.labels) == 1
    return ValidationReport(category=cat.name, problems=problems, modular=modular)


def apply_functor(functor: PivotalFunctorData, colour: Colour) -> Colour:
    """Linear extension of the functor's label map to colours."""
    out = Colour()
    for label, c in colour.items():
        out = out + functor.image[label].scale(c)
    return out


def identity_functor(cat: CategoryData) -> PivotalFunctorData:
    return PivotalFunctorData(
        source=cat,
        target=cat,
        image={label: Colour({label: 1}) for label in cat.labels},
        name="id",
    )


def twist_trace(cat: CategoryData, colour: Colour) -> complex:
    """Sum of multiplicity * dim * twist over a colour's support."""
    return sum(
        c * complex(cat.dim(label)) * complex(cat.twist(label))
        for label, c in colour.items()
    )


def phase(x: float) -> complex:
    """e^{2 pi i x} for a real (or Fraction) argument."""
    return cmath.exp(2j * cmath.pi * float(x))
