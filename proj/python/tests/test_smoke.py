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


import csv
import io
import json
import math
import os

import pytest

import mialloc


def test_constants():
    for theta in (1.0, 2.0, math.e, 60.0):
        assert mialloc.pi_one(theta) == pytest.approx(math.log(theta) + 1.0,
                                                      rel=1e-15)
        assert mialloc.pi_two(theta) == pytest.approx(2 * mialloc.pi_one(theta))
    for pi in (1.0, 2.5, 7.0):
        assert mialloc.alpha(pi) == pytest.approx(-pi * math.expm1(-1 / pi))
        r = math.exp(1 / pi)
        assert mialloc.large_n_ratio(pi) == pytest.approx(r / (r - 1))
    # Omega constant.
    assert mialloc.lambert_w(1.0) == pytest.approx(0.5671432904097838,
                                                   rel=1e-14)
    chi, chi_tilde = mialloc.chi(10.0)
    assert 0.0 < chi < 1.0 and chi_tilde > 1.0


def test_revenue_function():
    g = mialloc.RevenueFunction.piecewise_linear([3.0, 1.0], [0.5], 1.0)
    assert g.kind == "piecewise_linear"
    assert g(1.0) == pytest.approx(2.0)
    assert g.derivative(0.25) == pytest.approx(3.0)
    assert g.inverse(1.5) == pytest.approx(0.5)
    assert g.conjugate(2.0) == pytest.approx(0.5)
    assert g.demand(2.0) == pytest.approx((0.5, 0.5))
    with pytest.raises(mialloc.Error):
        g.inverse(5.0)


def test_instance_round_trip(tmp_path):
    inst = mialloc.gen_random(7, 3, 5, 10.0)
    text = inst.to_json()
    again = mialloc.Instance.from_json(text)
    assert again == inst
    assert again.to_json() == text
    path = str(tmp_path / "inst.json")
    inst.write(path)
    assert mialloc.Instance.read(path) == inst
    assert (inst.N, inst.T) == (3, 5)
    assert inst.theta == pytest.approx(10.0)
    assert inst.revenue_class == "gradient_bounded"


def test_invalid_instance():
    with pytest.raises(mialloc.InvalidInstanceError):
        mialloc.Instance.from_json(json.dumps({"capacity": [1.0]}))


def test_offline_matches_single():
    inst = mialloc.gen_staircase(math.e, 4, 1.0, 1)
    fns = [inst.revenue(t, 0) for t in range(inst.T)]
    single = mialloc.solve_single(fns, 1.0)
    multi = mialloc.solve_multi(inst)
    assert multi["objective"] == pytest.approx(single["objective"], rel=1e-6)
    # Staircase optimum: all capacity in the last slot, slope e.
    assert single["objective"] == pytest.approx(math.e, rel=1e-9)


def test_run_reports_bound():
    inst = mialloc.gen_random(3, 4, 6, 10.0)
    for algorithm in ("anp", "primal_dual"):
        report = mialloc.run(inst, algorithm)
        assert report["algorithm"].startswith(algorithm.split("_")[0])
        assert report["bound_holds"]
        assert report["ratio"] <= report["bound"] * (1 + 1e-6)
    with pytest.raises(mialloc.DomainError):
        mialloc.run(inst, "greedy")


def test_cr_table_golden():
    root = os.environ.get(
        "MIALLOC_SOURCE_DIR",
        os.path.join(os.path.dirname(__file__), "..", ".."))
    with open(os.path.join(root, "tests", "data", "cr_table_n3.csv")) as f:
        golden = list(csv_rows(f.read()))
    rows = mialloc.cr_table("1..60", 3)
    assert len(rows) == len(golden) == 60
    for row, ref in zip(rows, golden):
        assert row["theta"] == float(ref["theta"])
        assert row["ours"] == pytest.approx(float(ref["ours"]), rel=1e-11)
        assert row["prior_work"] is None


def csv_rows(text):
    return csv.DictReader(io.StringIO(text))


def test_suite_small():
    config = {
        "algorithms": ["cr_pursuit", "anp", "primal_dual"],
        "grid_step": 0.5,
        "oracle_max_cells": 2,
        "instances": [
            {"generator": "random", "seeds": [1, 2], "N": [1, 2], "T": [2],
             "theta": [2.0], "class": "gradient_bounded"},
        ],
    }
    report = mialloc.run_suite(config, jobs=1)
    assert report["bound_violations"] == 0
    assert not report["errors"]
    assert len(report["runs"]) > 0
