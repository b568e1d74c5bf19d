"""Trainer exception types."""


class TrainerError(Exception):
    pass


class ShapeError(TrainerError):
    """Tensor shapes incompatible with the loss definition."""


class DataError(TrainerError):
    """Corpus unusable (missing, wrong rate, clips too short)."""


class TrainingFailure(TrainerError):
    """Training diverged; carries the step index."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step
