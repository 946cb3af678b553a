"""Shared exception types."""


class UnknownVertexError(ValueError):
    """A vertex id outside the graph was used."""


class MissingEdgeError(ValueError):
    """An edge deletion referenced an edge that is not present."""


class DetachedVertexError(ValueError):
    """A spanning-tree query touched a vertex unreachable from the root."""


class IrreducibleError(Exception):
    """The update would create a loop region with more than one entry."""

    def __init__(self, src: int, dst: int, reason: str = ""):
        self.src = src
        self.dst = dst
        self.reason = reason
        msg = f"irreducible update ({src} -> {dst})"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class LatchedError(RuntimeError):
    """The forest is latched after an accepted irreducible update."""


class StreamSyntaxError(ValueError):
    """A stream file failed to parse or validate."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")
