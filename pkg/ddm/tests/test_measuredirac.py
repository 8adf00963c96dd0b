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

import pytest

from ddm.measurebase import MeasureException
from ddm.measuredirac import DiracSequenceMeasure
from ddm.shift import Alphabet, Cylinder, CylinderSet, parse_cylinder_set

BIN = Alphabet(("0", "1"))


@pytest.fixture
def alternating():
    return DiracSequenceMeasure(BIN, ["0", "1"])


def test_symbols(alternating):
    assert [alternating.symbol_at(i) for i in range(-2, 3)] == ["0", "1", "0", "1", "0"]
    pinned = DiracSequenceMeasure(BIN, ["0"], overrides={5: "1"})
    assert pinned.symbol_at(5) == "1"
    assert pinned.symbol_at(4) == "0"


def test_phi_mass(alternating):
    assert alternating.phi_mass(0, Cylinder(0, ("0",), BIN)) == 1
    assert alternating.phi_mass(0, Cylinder(1, ("0",), BIN)) == 0
    assert alternating.phi_mass(0, Cylinder(-1, ("1", "0", "1"), BIN)) == 1
    assert alternating.phi_mass(-1, Cylinder(0, ("0",), BIN)) == 0
    assert alternating.phi_mass(-1, Cylinder(-1, ("1", "0"), BIN)) == 0
    assert alternating.phi_mass(-1, Cylinder(-1, ("0", "1"), BIN)) == 1
    assert alternating.total() == 1


def test_set_mass(alternating):
    assert alternating.phi_set_mass(0, parse_cylinder_set("m=0;w=0|m=0;w=1", BIN)) == 1
    assert alternating.phi_set_mass(0, CylinderSet.empty(BIN)) == 0


def test_shifted(alternating):
    shifted = alternating.shifted(1)
    assert shifted.symbol_at(0) == "1"
    c = Cylinder(0, ("1",), BIN)
    assert shifted.phi_mass(0, c) == alternating.phi_mass(-1, c)
    assert DiracSequenceMeasure(BIN, ["0"], overrides={3: "1"}).shifted(2).overrides == {1: "1"}
    with pytest.raises(MeasureException):
        alternating.shifted(-1)


def test_consistency(alternating):
    assert not alternating.is_consistent()
    assert DiracSequenceMeasure(BIN, ["1", "1"]).is_consistent()
    assert not DiracSequenceMeasure(BIN, ["1"], overrides={0: "0"}).is_consistent()


def test_describe(alternating):
    assert alternating.describe() == {"mode": "dirac-sequence", "pattern": ["0", "1"], "phase": 0, "overrides": {}}


@pytest.mark.parametrize("pattern, overrides", [([], None), (["2"], None), (["0"], {1: "x"})])
def test_invalid(pattern, overrides):
    with pytest.raises(MeasureException) as excinfo:
        DiracSequenceMeasure(BIN, pattern, overrides=overrides)
    assert str(excinfo.value).startswith("measure exception sequence")
