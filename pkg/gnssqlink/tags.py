# -*- coding: utf-8 -*-
"""Streams of time-tagged detections.

Streams of time-tagged detections provide the following functionality:

- representing detections as (time, channel, truth) events;
- merging streams deterministically by time;
- selecting the detections of a channel;
- counting detections per truth class;
- writing a stream to a CSV file with a JSON metadata sidecar;
- reading a stream from such files.

The truth of a detection (signal, dark, fluorescence or albedo) is only known
for simulated streams.
"""

import json
import logging
import os

import numpy as np
import pandas as pd

from gnssqlink.constants import TRUTH_CLASSES
from gnssqlink.exceptions import DataError

logger = logging.getLogger(__name__)


def truth_code(name):
    """Retrieve the code of a truth class."""
    try:
        return TRUTH_CLASSES.index(name)
    except ValueError:
        raise DataError("Truth class {} is not supported.".format(name))


class TagStream(object):
    """Time-ordered detections with their channels, optional truth classes
    and metadata.
    """

    def __init__(self, times, channels, truth=None, metadata=None):
        times = np.asarray(times, dtype=np.int64)
        channels = np.asarray(channels, dtype=np.int16)
        if times.shape != channels.shape or times.ndim != 1:
            raise DataError("Times and channels must be 1-D arrays of equal "
                            "length.")
        if truth is not None:
            truth = np.asarray(truth, dtype=np.int8)
            if truth.shape != times.shape:
                raise DataError("Truth classes must match the detections.")
        order = np.lexsort((channels, times))
        self._times = times[order]
        self._channels = channels[order]
        self._truth = truth[order] if truth is not None else None
        for channel in np.unique(self._channels):
            if np.any(np.diff(self._times[self._channels == channel]) <= 0):
                raise DataError("Detection times of channel {} must be "
                                "strictly increasing.".format(channel))
        for array in (self._times, self._channels, self._truth):
            if array is not None:
                array.flags.writeable = False
        self._metadata = dict(metadata or {})

    def __len__(self):
        return len(self._times)

    def __repr__(self):
        return "<TagStream {0} detections on channels {1}>".format(
            len(self), list(self.channel_ids))

    @property
    def channel_ids(self):
        """Channels with at least one detection, plus those declared in the
        metadata.
        """
        declared = self._metadata.get('channels', [])
        return sorted(set(int(c) for c in np.unique(self._channels)) |
                      set(int(c) for c in declared))

    @property
    def channels(self):
        """Channel of each detection."""
        return self._channels

    @property
    def duration(self):
        """Acquisition duration (ps), from the metadata if known, otherwise
        up to the last detection.
        """
        if 'duration_ps' in self._metadata:
            return int(self._metadata['duration_ps'])
        return int(self._times[-1]) + 1 if len(self) else 0

    @property
    def metadata(self):
        """Metadata of the stream."""
        return self._metadata

    @property
    def times(self):
        """Detection times (ps)."""
        return self._times

    @property
    def truth(self):
        """Truth class code of each detection, or None if not known."""
        return self._truth

    def counts(self):
        """Number of detections per truth class."""
        if self._truth is None:
            return {}
        return {name: int(np.count_nonzero(self._truth == code))
                for code, name in enumerate(TRUTH_CLASSES)}

    def select(self, channel):
        """Stream of the detections of a channel."""
        mask = self._channels == channel
        return TagStream(self._times[mask], self._channels[mask],
                         None if self._truth is None else self._truth[mask],
                         self._metadata)

    def without_truth(self):
        """Stream with the truth classes dropped."""
        return TagStream(self._times, self._channels, None, self._metadata)

    @classmethod
    def from_events(cls, times, channels, truth=None, metadata=None,
                    priority=None):
        """Stream from unordered events.

        Of coincident events (same time on the same channel) only the one
        with the lowest priority is kept; the priority defaults to the truth
        code, so that a signal detection masks any coincident noise.
        """
        times = np.asarray(times, dtype=np.int64)
        channels = np.asarray(channels, dtype=np.int16)
        if priority is None:
            priority = truth if truth is not None \
                else np.zeros(len(times), dtype=np.int64)
        order = np.lexsort((np.asarray(priority), channels, times))
        times, channels = times[order], channels[order]
        keep = np.ones(len(times), dtype=bool)
        keep[1:] = (np.diff(times) != 0) | (np.diff(channels) != 0)
        if not np.all(keep):
            logger.debug("Dropped %d coincident detections.",
                         np.count_nonzero(~keep))
        if truth is not None:
            truth = np.asarray(truth)[order][keep]
        return cls(times[keep], channels[keep], truth, metadata)

    @classmethod
    def merge(cls, streams, metadata=None):
        """Merge streams by time; equal times on the same channel keep the
        detection of the earlier stream only.
        """
        streams = list(streams)
        if not streams:
            return cls([], [], None, metadata)
        with_truth = all(s.truth is not None for s in streams)
        return cls.from_events(
            np.concatenate([s.times for s in streams]),
            np.concatenate([s.channels for s in streams]),
            np.concatenate([s.truth for s in streams]) if with_truth else None,
            metadata,
            np.concatenate([np.full(len(s), i, dtype=np.int64)
                            for i, s in enumerate(streams)]))


def sidecar_path(filename):
    """Path of the JSON metadata sidecar of a tag file."""
    root, _ = os.path.splitext(str(filename))
    return root + ".json"


def write_tag_stream(stream, filename, with_truth=True):
    """Write a stream to a CSV file (time_ps, channel, truth) with a comment
    header carrying the provenance and a JSON metadata sidecar.
    """
    table = pd.DataFrame({'time_ps': stream.times,
                          'channel': stream.channels})
    if with_truth and stream.truth is not None:
        table['truth'] = np.asarray(TRUTH_CLASSES)[stream.truth]
    metadata = dict(stream.metadata)
    with open(filename, 'w', newline='') as tag_file:
        tag_file.write("# scenario_hash={0} seed={1}\n".format(
            metadata.get('scenario_hash', ''), metadata.get('seed', '')))
        table.to_csv(tag_file, index=False, lineterminator='\n')
    metadata['counts'] = stream.counts()
    with open(sidecar_path(filename), 'w') as sidecar:
        json.dump(metadata, sidecar, indent=2, sort_keys=True)
        sidecar.write("\n")
    logger.debug("Wrote %d detections to %s.", len(stream), filename)


def read_tag_stream(filename):
    """Read a stream from a CSV file (time_ps, channel, optional truth) and
    its JSON metadata sidecar, if present.
    """
    try:
        table = pd.read_csv(filename, comment='#',
                            dtype={'time_ps': np.int64, 'channel': np.int16})
    except (OSError, ValueError) as err:
        raise DataError("Could not read tag file {0}: {1}".format(filename,
                                                                   err))
    missing = {'time_ps', 'channel'} - set(table.columns)
    if missing:
        raise DataError("Could not read tag file {0}: missing columns {1}."
                        "".format(filename, ", ".join(sorted(missing))))
    truth = None
    if 'truth' in table.columns:
        truth = np.array([truth_code(name) for name in table['truth']],
                         dtype=np.int8)
    metadata = {}
    if os.path.exists(sidecar_path(filename)):
        try:
            with open(sidecar_path(filename)) as sidecar:
                metadata = json.load(sidecar)
        except ValueError as err:
            raise DataError("Could not read metadata of {0}: {1}".format(
                filename, err))
        metadata.pop('counts', None)
    return TagStream(table['time_ps'].to_numpy(), table['channel'].to_numpy(),
                     truth, metadata)
