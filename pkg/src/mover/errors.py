"""Exception classes shared across the engine."""


class MoverError(Exception):
    """Base class for all engine errors."""


class EmptyInput(MoverError):
    """Raised when an operation receives empty text or an empty sequence."""


class TagCountMismatch(MoverError):
    """Tagger returned a tag sequence whose length differs from the token count."""


class BackendUnavailable(MoverError):
    """A model backend could not be reached or returned an unusable response."""


class AllRequestsFailed(MoverError):
    """Every backend request in a batch failed; nothing to work with."""


class NoMatch(MoverError):
    """No span of the sentence matches any known pattern."""


class NoOverlap(MoverError):
    """A sentence pair shares no common token, so no span can be aligned."""


class ZeroVector(MoverError):
    """Cosine distance is undefined for a zero-norm vector."""


class InconsistentDim(MoverError):
    """An embedding file mixes vectors of different dimensionality."""


class PoolTooSmall(MoverError):
    """Requested a sample larger than the available pool."""


class IncompleteLabels(MoverError):
    """An annotation batch is missing judgments for some records."""


class EmptyCandidateSet(MoverError):
    """Ranking was asked to select from zero candidates."""


class ConfigError(MoverError):
    """Invalid engine configuration value or unreadable config file."""
