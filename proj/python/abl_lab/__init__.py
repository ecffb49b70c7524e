# Copyright 2026 The ABL Lab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for abl_lab. Reports are returned as dicts."""

import json
import os

from . import _core
from ._core import DimensionError, ImpossibleBranch, ValidationError, abl_probability

__all__ = [
    "DimensionError",
    "ImpossibleBranch",
    "ValidationError",
    "abl_probability",
    "berkson",
    "exact",
    "mc",
    "run_cli",
    "verify",
]


def exact(path):
    return json.loads(_core.exact(os.fspath(path)))


def mc(path, n=10000, seed=12345, postselect=True, threads=1):
    return json.loads(_core.mc(os.fspath(path), n, seed, postselect, threads))


def verify(max_dim=3, max_n=2, instances=200, seed=12345):
    return json.loads(_core.verify(max_dim, max_n, instances, seed))


def berkson(p_a=0.1, p_b=0.1, n=10000, seed=12345):
    return json.loads(_core.berkson(p_a, p_b, n, seed))


def run_cli(*args):
    """Runs the command line front end in-process; returns (code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
