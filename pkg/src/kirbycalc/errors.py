"""Exception hierarchy shared by all kirbycalc modules.

Validation-type failures exit the CLI with code 2, resource limits with
code 3; everything inherits from KirbyCalcError so callers can catch the
whole family at once.
"""


class KirbyCalcError(Exception):
    """Base class for all library errors."""


class SchemaError(KirbyCalcError):
    """Malformed input document (KDF, group file, category file...)."""


class ConsistencyError(KirbyCalcError):
    """Declared framing/word/linking data contradicts the planar code."""


class DottedLinkError(KirbyCalcError):
    """Dotted circles do not form an unlink in the planar code."""


class PreconditionFailed(KirbyCalcError):
    """A handle move was requested on a diagram that does not admit it."""


class PdPresentError(KirbyCalcError):
    """Move only implemented at the word/linking level; refuse on planar codes."""


class MissingPd(KirbyCalcError):
    """An operation needed a planar code the diagram does not carry."""


class NotModular(KirbyCalcError):
    """Category has transparent simple objects besides the unit."""


class NonPositiveGlobalDimension(KirbyCalcError):
    """Sum of squared dimensions is not a positive real."""


class ZeroDimension(KirbyCalcError):
    """A label has categorical dimension 0 where a quotient is needed."""


class ResourceLimit(KirbyCalcError):
    """Cabled skein diagram exceeds the configured crossing cap."""


class InvalidTarget(KirbyCalcError):
    """Target category rejected (e.g. nontrivial twist on a transparent label)."""


class NonInvertibleCp2(KirbyCalcError):
    """The simply-connected closed form needs invertible CP^2 values."""


class NotInjectiveLabelMap(KirbyCalcError):
    """State-sum normalization is only meaningful for full inclusions."""


class UnknownManifold(KirbyCalcError):
    """Requested library entry is not registered."""
