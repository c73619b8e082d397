# Copyright 2026 The mialloc Authors
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

"""Online allocation across multiple inventories."""

import csv
import io
import json

from mialloc._core import (
    BudgetExceededError,
    DomainError,
    Error,
    InfeasibleTargetError,
    Instance,
    InvalidInstanceError,
    NonConvergenceError,
    RevenueFunction,
    alpha,
    chi,
    competitive_bound,
    gen_random,
    gen_staircase,
    lambert_w,
    large_n_ratio,
    oracle_grid,
    pi_one,
    pi_two,
    solve_multi,
    solve_single,
)
from mialloc import _core

__all__ = [
    "BudgetExceededError",
    "DomainError",
    "Error",
    "InfeasibleTargetError",
    "Instance",
    "InvalidInstanceError",
    "NonConvergenceError",
    "RevenueFunction",
    "alpha",
    "chi",
    "competitive_bound",
    "cr_table",
    "gen_random",
    "gen_staircase",
    "lambert_w",
    "large_n_ratio",
    "oracle_grid",
    "pi_one",
    "pi_two",
    "run",
    "run_suite",
    "solve_multi",
    "solve_single",
]


def run(instance, algorithm, pi=0.0):
    """Runs one algorithm; returns the report as a dict.

    algorithm is one of cr_pursuit, anp, anp_small, anp_large, primal_dual.
    pi <= 0 selects the default for the instance class.
    """
    return json.loads(_core.run_json(instance, algorithm, pi))


def run_suite(config, jobs=0, grid_step=0.0):
    """Runs a suite config (dict or JSON text); returns the report as a dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_core.run_suite_json(text, jobs, grid_step))


def cr_table(thetas="1..60", n=3):
    """Ratio table rows as dicts with float values."""
    rows = csv.DictReader(io.StringIO(_core.cr_table_csv(thetas, n)))
    return [
        {k: (float(v) if v else None) for k, v in row.items()} for row in rows
    ]
