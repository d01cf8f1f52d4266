# Copyright 2026 arrangekit contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import logging
import sys

LOGGER_NAME = "arrangekit"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_LOG = logging.getLogger(LOGGER_NAME)


def init_logging(level: int = logging.INFO) -> None:
    """
    Route the package's log records to stderr.

    Command output (tables, JSON documents) goes to stdout, so log records are kept on stderr. Module loggers are
    children of `LOGGER_NAME` and inherit the handler. Calling this again only adjusts the level.
    """

    _LOG.propagate = False
    _LOG.setLevel(level)
    if not _LOG.handlers:
        handler = logging.StreamHandler(stream=sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        _LOG.addHandler(handler)
