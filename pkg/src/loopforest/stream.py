"""Line-oriented update stream files.

Format (UTF-8, one item per line): `n <count>`, `root <id>` (optional,
defaults to 0), `+ <u> <v>` insert, `- <u> <v>` delete, `#` comments, blank
lines ignored. The header must precede events; deletes must reference an
edge live at their position in the stream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StreamSyntaxError


@dataclass(frozen=True)
class UpdateEvent:
    kind: str  # "+" or "-"
    src: int
    dst: int
    seq: int


@dataclass(frozen=True)
class UpdateStream:
    n: int
    root: int
    events: tuple[UpdateEvent, ...]


def parse_stream(text: str | bytes) -> UpdateStream:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n: int | None = None
    root = 0
    events: list[UpdateEvent] = []
    live: dict[tuple[int, int], int] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        tag = fields[0]
        if tag == "n":
            if len(fields) != 2 or not fields[1].isdigit():
                raise StreamSyntaxError(line_no, "expected: n <count>")
            if n is not None:
                raise StreamSyntaxError(line_no, "duplicate n line")
            n = int(fields[1])
            if n < 1:
                raise StreamSyntaxError(line_no, "vertex count must be >= 1")
        elif tag == "root":
            if len(fields) != 2 or not fields[1].isdigit():
                raise StreamSyntaxError(line_no, "expected: root <id>")
            if events:
                raise StreamSyntaxError(line_no, "root line must precede events")
            root = int(fields[1])
        elif tag in ("+", "-"):
            if n is None:
                raise StreamSyntaxError(line_no, "n line must precede events")
            if len(fields) != 3:
                raise StreamSyntaxError(line_no, f"expected: {tag} <u> <v>")
            try:
                u, v = int(fields[1]), int(fields[2])
            except ValueError:
                raise StreamSyntaxError(line_no, "vertex ids must be integers") from None
            if not (0 <= u < n and 0 <= v < n):
                raise StreamSyntaxError(line_no, f"vertex id outside [0, {n})")
            key = (u, v)
            if tag == "+":
                live[key] = live.get(key, 0) + 1
            else:
                if live.get(key, 0) == 0:
                    raise StreamSyntaxError(line_no, f"deleting absent edge ({u}, {v})")
                live[key] -= 1
            events.append(UpdateEvent(tag, u, v, len(events)))
        else:
            raise StreamSyntaxError(line_no, f"unknown directive {tag!r}")

    if n is None:
        raise StreamSyntaxError(0, "missing n line")
    if not 0 <= root < n:
        raise StreamSyntaxError(0, f"root {root} outside [0, {n})")
    return UpdateStream(n, root, tuple(events))


def format_stream(stream: UpdateStream, comment: str = "") -> str:
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    lines.append(f"n {stream.n}")
    lines.append(f"root {stream.root}")
    for ev in stream.events:
        lines.append(f"{ev.kind} {ev.src} {ev.dst}")
    return "\n".join(lines) + "\n"


def validate_events(n: int, events: list[UpdateEvent]) -> bool:
    """True iff every delete references a live edge at its position."""
    live: dict[tuple[int, int], int] = {}
    for ev in events:
        key = (ev.src, ev.dst)
        if ev.kind == "+":
            live[key] = live.get(key, 0) + 1
        else:
            if live.get(key, 0) == 0:
                return False
            live[key] -= 1
    return True
