"""Exception hierarchy shared by the library, CLI and HTTP service."""


class TrackmeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TrackmeError):
    """A file, request or data structure violates the annotation contract.

    Maps to CLI exit code 1 and HTTP 400.
    """


class PreconditionError(TrackmeError):
    """An engine cannot run because its input state is insufficient.

    Examples: fewer than two annotated keyframes for interpolation, or a
    seed frame without IDs for association. Maps to CLI exit code 2 and
    HTTP 422.
    """


class ConflictError(PreconditionError):
    """A batch edit would produce a duplicate (label, id) pair in a frame.

    Carries the index of the first offending frame; the edit is aborted
    with zero files written.
    """

    def __init__(self, message: str, frame_index: int):
        super().__init__(message)
        self.frame_index = frame_index
