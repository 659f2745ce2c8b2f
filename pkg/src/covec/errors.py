"""Exception types shared across the pipeline."""


class CoocFormatError(ValueError):
    """Malformed on-disk co-occurrence data (carries the byte offset)."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnobservedPairError(KeyError):
    """PMI requested for a (word, context) cell that was never counted."""


class ZeroMarginalError(ValueError):
    """PMI requested for an id whose marginal count is zero."""


class TrainingDivergedError(FloatingPointError):
    """A NaN/Inf appeared during training; records where it happened."""

    def __init__(self, epoch: int, word_id: int, context_id: int):
        super().__init__(
            f"non-finite update at epoch {epoch}, cell ({word_id}, {context_id})"
        )
        self.epoch = epoch
        self.word_id = word_id
        self.context_id = context_id
