# Copyright 2026 The beq Authors
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

import math

import numpy as np
import pytest

import beq


def test_problem_registry():
    names = [name for name, _ in beq.problems()]
    assert names == ["paper-r5", "quadratic-hierarchical", "toy-1d"]
    assert "ipsa" in beq.methods()


def test_prox_regimes():
    w = np.array([3.0, 4.0])
    np.testing.assert_allclose(beq.prox_max_one_norm(1.0, w), [2.4, 3.2], atol=1e-15)
    inside = np.array([0.3, 0.4])
    np.testing.assert_array_equal(beq.prox_max_one_norm(2.0, inside), inside)
    with pytest.raises(ValueError):
        beq.prox_max_one_norm(0.0, w)


def test_run_returns_columns():
    t = beq.run(budget=200)
    assert t["x"].shape == (201, 5)
    assert t["n"][0] == 1 and t["n"][-1] == 201
    np.testing.assert_array_equal(t["x"][0], np.ones(5))
    assert t["err_to_ref"][0] == pytest.approx(math.sqrt(5))
    assert t["err_to_ref"][-1] < 1e-3
    assert np.all(np.isnan(t["ep_residual"]))


def test_psm_and_ipsa_without_inertia_agree():
    a = beq.run(method="ipsa", alpha="0", budget=100)
    b = beq.run(method="psm", alpha="0", budget=100)
    np.testing.assert_array_equal(a["x"], b["x"])


def test_regime_report():
    ok = beq.validate_regime()
    assert ok["weak"] and ok["strong"]
    bad = beq.validate_regime(alpha="0.3")
    assert not bad["weak"]
    assert bad["weak_violations"]


def test_bad_inputs():
    with pytest.raises(ValueError):
        beq.run(lambda_="1/")
    with pytest.raises(ValueError):
        beq.run(method="newton")


def test_ep_residual_and_reference():
    assert beq.ep_residual(np.zeros(5)) == 0.0
    assert beq.ep_residual(np.array([2.0, 0, 0, 0, 0])) == pytest.approx(1.0)
    np.testing.assert_array_equal(beq.reference_point(), np.zeros(5))
