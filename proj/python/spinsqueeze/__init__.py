# SPDX-License-Identifier: Apache-2.0
"""Measurement-induced spin squeezing simulator (Python bindings)."""

from ._spinsqueeze import *  # noqa: F401,F403
from ._spinsqueeze import __version__  # noqa: F401
