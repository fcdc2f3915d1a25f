"""Sharded growable arrays of doubling buckets, with baselines, a memory
model and the benchmark harness."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
