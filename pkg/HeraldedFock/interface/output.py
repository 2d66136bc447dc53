# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import json
import logging
import os
import sys

import numpy as np

from ..core.errors import InvalidConfigError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'


def _clean(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if not np.isfinite(value) else float(FLOAT_FORMAT % value)
    if isinstance(value, dict):
        return dict((k, _clean(v)) for k, v in value.items())
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    return value


class DataSaver(object):
    """
    Writes a result table to a file, or to stdout when no path is given.

    :param config: the 'output' section of the run configuration.
    """

    def __init__(self, config):
        self.path = config.get('path')
        if self.path is not None:
            directory = os.path.dirname(os.path.abspath(self.path))
            if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
                raise InvalidConfigError('output directory "{}" is not writable'.format(directory))

    def render(self, frame, metadata):
        raise NotImplementedError

    def save_data(self, frame, metadata):
        text = self.render(frame, metadata)
        if self.path is None:
            sys.stdout.write(text)
        else:
            with open(self.path, 'w', newline='\n') as fileout:
                fileout.write(text)
            logger.info('wrote %d rows to %s', len(frame), self.path)


class CsvSaver(DataSaver):
    def render(self, frame, metadata):
        return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


class JsonSaver(DataSaver):
    def render(self, frame, metadata):
        document = {'metadata': _clean(metadata),
                    'columns': list(frame.columns),
                    'data': [_clean(list(row)) for row in frame.itertuples(index=False)]}
        return json.dumps(document, indent=2) + '\n'


class OutputEng(object):

    _support_savers = {
                            'csv': CsvSaver,
                            'json': JsonSaver,
                            }

    def __init__(self, config):
        fmt = str(config.get('format', 'csv')).lower()
        if fmt not in self._support_savers:
            raise InvalidConfigError('unsupported output format ' + repr(config.get('format')))
        self.config = config
        self.saver = self._support_savers[fmt](config)

    def save(self, frame, metadata):
        self.saver.save_data(frame, metadata)
