# -*- coding: utf-8 -*-
import json

import numpy as np
import pytest

from gnssqlink.exceptions import DataError
from gnssqlink.tags import (TagStream, read_tag_stream, sidecar_path,
                            truth_code, write_tag_stream)


def small_stream():
    return TagStream([30, 10, 20, 10], [0, 0, 0, 1], [1, 0, 3, 2],
                     metadata={'seed': 4, 'scenario_hash': 'abc',
                               'duration_ps': 100, 'channels': [0, 1, 2]})


def test_stream_is_sorted() -> None:
    stream = small_stream()
    assert stream.times.tolist() == [10, 10, 20, 30]
    assert stream.channels.tolist() == [0, 1, 0, 0]
    assert stream.truth.tolist() == [0, 2, 3, 1]
    assert stream.channel_ids == [0, 1, 2]
    assert stream.duration == 100
    with pytest.raises(ValueError):
        stream.times[0] = 5


def test_duplicate_times_rejected() -> None:
    with pytest.raises(DataError):
        TagStream([10, 10], [0, 0])
    with pytest.raises(DataError):
        TagStream([10, 20], [0])


def test_counts_and_select() -> None:
    stream = small_stream()
    assert stream.counts() == {'signal': 1, 'dark': 1, 'fluorescence': 1,
                               'albedo': 1}
    channel = stream.select(0)
    assert channel.times.tolist() == [10, 20, 30]
    assert channel.metadata['seed'] == 4
    assert stream.without_truth().counts() == {}
    assert TagStream([], []).duration == 0


def test_from_events_keeps_signal() -> None:
    stream = TagStream.from_events([5, 5, 5, 7], [0, 0, 1, 0], [1, 0, 3, 2])
    assert stream.times.tolist() == [5, 5, 7]
    assert stream.truth.tolist() == [0, 3, 2]


def test_merge_is_deterministic() -> None:
    first = TagStream([1, 4], [0, 0], [0, 0])
    second = TagStream([2, 4], [0, 0], [1, 1])
    merged = TagStream.merge([first, second], metadata={'seed': 1})
    assert merged.times.tolist() == [1, 2, 4]
    assert merged.truth.tolist() == [0, 1, 0]
    swapped = TagStream.merge([second, first])
    assert swapped.truth.tolist() == [0, 1, 1]
    assert len(TagStream.merge([])) == 0


def test_write_and_read(tmp_path) -> None:
    filename = str(tmp_path / "tags.csv")
    write_tag_stream(small_stream(), filename)
    with open(filename) as tag_file:
        assert tag_file.readline() == "# scenario_hash=abc seed=4\n"
    with open(sidecar_path(filename)) as sidecar:
        metadata = json.load(sidecar)
    assert metadata['counts']['albedo'] == 1
    stream = read_tag_stream(filename)
    assert np.array_equal(stream.times, small_stream().times)
    assert np.array_equal(stream.truth, small_stream().truth)
    assert stream.metadata == small_stream().metadata


def test_write_without_truth(tmp_path) -> None:
    filename = str(tmp_path / "tags.csv")
    write_tag_stream(small_stream(), filename, with_truth=False)
    stream = read_tag_stream(filename)
    assert stream.truth is None
    assert len(stream) == 4


def test_read_errors(tmp_path) -> None:
    with pytest.raises(DataError):
        read_tag_stream(str(tmp_path / "missing.csv"))
    bad = tmp_path / "bad.csv"
    bad.write_text("time,channel\n1,0\n")
    with pytest.raises(DataError):
        read_tag_stream(str(bad))
    unknown = tmp_path / "unknown.csv"
    unknown.write_text("time_ps,channel,truth\n1,0,cosmic\n")
    with pytest.raises(DataError):
        read_tag_stream(str(unknown))
    assert truth_code('albedo') == 3
