# -*- coding: utf-8 -*-

# Copyright 2026 The ddm authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from unittest.mock import patch

import pytest

from ddm.selftest import Selftest


@pytest.fixture(scope="module")
def selftest():
    return Selftest(seed=0, scale=0.05)


@pytest.fixture(scope="module")
def chains(selftest):
    return selftest.stationary_chains()


@pytest.fixture(scope="module")
def pairs(selftest):
    return selftest.random_pairs()


def test_count(selftest):
    assert selftest.count(20) == 1
    assert Selftest(scale=1.0).count(25) == 25
    assert Selftest(scale=0.5).count(5) == 2


def test_random_systems_repeat(selftest):
    first = [sys.name for sys, _ in selftest.random_pairs()]
    again = [sys.name for sys, _ in Selftest(seed=0, scale=0.05).random_pairs()]
    assert first == again
    assert [nu.atoms for _, nu in selftest.stationary_chains()] == [nu.atoms for _, nu in
                                                                     Selftest(0, 0.05).stationary_chains()]


def test_example_one(selftest):
    record = selftest.example_one()
    assert record["criterion"] == 1
    assert record["passed"]
    assert record["detail"]["star"] == [0, 0, 0]


def test_consistency(selftest, chains):
    record = selftest.consistency(chains)
    assert record["passed"]
    assert record["detail"]["checked"] > 0
    assert record["detail"]["searched"] > 0


def test_oracle(selftest, pairs):
    record = selftest.oracle(pairs)
    assert record["passed"], record["detail"]["mismatches"]


def test_monotonicity(selftest, chains, pairs):
    assert selftest.monotonicity(chains, pairs, max_depth=3)["passed"]


def test_identities(selftest, chains):
    record = selftest.identities(chains)
    assert record["passed"]
    assert record["detail"]["rectangle"] <= 1e-12


def test_shift_chain(selftest):
    assert selftest.shift_chain()["passed"]


def test_equilibrium_and_pushforward(selftest, chains):
    assert selftest.equilibrium(chains)["passed"]
    assert selftest.pushforward(chains)["passed"]


def test_coding_bounds(selftest):
    record = selftest.coding_bounds(depth=10)
    assert record["passed"]
    assert record["detail"]["violations"] == 0


def test_positivity(selftest):
    record = selftest.positivity()
    assert record["passed"]
    assert min(record["detail"]["profile"]) >= 0.5
    assert all(record["detail"]["oracle_certified"])


def test_positivity_threshold(selftest):
    with patch("ddm.selftest.phi_estimate") as estimate, patch("ddm.selftest.phi_bruteforce") as oracle:
        estimate.return_value.profile = [0.45] * 4
        oracle.return_value.value = 0.45
        record = selftest.positivity(past_depth=3)
    assert not record["passed"]


def test_repeated_runs():
    records = [{"criterion": 1, "name": "one", "passed": True, "detail": {"value": "1/2"}}]
    with patch.object(Selftest, "criteria", side_effect=lambda: [dict(r) for r in records]) as criteria:
        result = Selftest(seed=3).run()
    assert criteria.call_count == 2
    assert result["passed"]
    assert result["criteria"][-1]["criterion"] == 11
    assert result["criteria"][-1]["detail"]["hash"] == result["criteria"][-1]["detail"]["again"]


def test_repeated_runs_differ():
    runs = iter([[{"criterion": 1, "name": "one", "passed": True, "detail": {"value": 1}}],
                 [{"criterion": 1, "name": "one", "passed": True, "detail": {"value": 2}}]])
    with patch.object(Selftest, "criteria", side_effect=lambda: next(runs)):
        result = Selftest().run()
    assert not result["criteria"][-1]["passed"]
    assert not result["passed"]
