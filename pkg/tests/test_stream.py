import pytest

from loopforest.errors import StreamSyntaxError
from loopforest.stream import (UpdateEvent, UpdateStream, format_stream,
                               parse_stream, validate_events)


def test_parse_basic():
    s = parse_stream("n 3\nroot 0\n+ 0 1\n+ 1 2\n+ 2 1\n")
    assert s.n == 3 and s.root == 0
    assert len(s.events) == 3
    assert s.events[2] == UpdateEvent("+", 2, 1, 2)


def test_parse_comments_blanks_and_default_root():
    s = parse_stream("# a scenario\n\nn 2\n\n+ 0 1\n# done\n")
    assert s.root == 0
    assert len(s.events) == 1


def test_parse_bytes():
    s = parse_stream(b"n 1\n+ 0 0\n- 0 0\n")
    assert len(s.events) == 2


def test_empty_event_list_is_valid():
    s = parse_stream("n 4\nroot 2\n")
    assert s.events == () and s.root == 2


def test_delete_of_absent_edge_positions_error():
    with pytest.raises(StreamSyntaxError) as info:
        parse_stream("n 3\nroot 0\n- 0 1\n")
    assert info.value.line_no == 3


def test_delete_after_matching_insert_ok():
    s = parse_stream("n 3\n+ 0 1\n- 0 1\n")
    assert len(s.events) == 2


def test_id_out_of_range():
    with pytest.raises(StreamSyntaxError) as info:
        parse_stream("n 3\n+ 0 3\n")
    assert info.value.line_no == 2


def test_missing_n():
    with pytest.raises(StreamSyntaxError):
        parse_stream("+ 0 1\n")
    with pytest.raises(StreamSyntaxError):
        parse_stream("root 0\n")


def test_unknown_directive_and_arity():
    with pytest.raises(StreamSyntaxError):
        parse_stream("n 2\n* 0 1\n")
    with pytest.raises(StreamSyntaxError):
        parse_stream("n 2\n+ 0\n")
    with pytest.raises(StreamSyntaxError):
        parse_stream("n 2\n+ 0 x\n")


def test_roundtrip():
    s = parse_stream("n 3\nroot 0\n+ 0 1\n+ 1 2\n- 0 1\n")
    assert parse_stream(format_stream(s)) == s


def test_validate_events():
    good = [UpdateEvent("+", 0, 1, 0), UpdateEvent("-", 0, 1, 1)]
    bad = [UpdateEvent("-", 0, 1, 0)]
    assert validate_events(2, good)
    assert not validate_events(2, bad)
