# SPDX-License-Identifier: Apache-2.0
#
# dpris - dual-polarized RIS-fed holographic MIMO link simulator
# Copyright (C) 2026 The dpris authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
"""Dual-polarized RIS-fed holographic MIMO link model."""

import os
from pathlib import Path

from ._dpris import (
    DegenerateGeometry,
    ModelInconsistency,
    Scenario,
    capacity,
    closed_form_upper_bound,
    moment_upper_bound,
    optimal_power_allocation,
    single_pol_upper_bound,
    sweep_csv,
    xpd_threshold,
)

__all__ = [
    "DegenerateGeometry",
    "ModelInconsistency",
    "Scenario",
    "capacity",
    "closed_form_upper_bound",
    "moment_upper_bound",
    "optimal_power_allocation",
    "single_pol_upper_bound",
    "sweep_csv",
    "xpd_threshold",
    "run_sweep_file",
    "recipe_path",
]


def run_sweep_file(path, **overrides):
    """Run the sweep spec at `path` and return the CSV text."""
    text = Path(path).read_text()
    return sweep_csv(text, {k: str(v) for k, v in overrides.items()})


def recipe_path(name):
    """Path of a bundled figure recipe; the directory comes from DPRIS_RECIPES_DIR."""
    root = os.environ.get("DPRIS_RECIPES_DIR")
    if root is None:
        raise FileNotFoundError("DPRIS_RECIPES_DIR is not set")
    path = Path(root) / f"{name}.cfg"
    if not path.is_file():
        raise FileNotFoundError(path)
    return path
