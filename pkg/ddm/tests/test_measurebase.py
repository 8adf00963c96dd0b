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

import unittest
from threading import Lock

import pytest

from ddm.common_utils import FakeLock
from ddm.measurebase import MeasureBase, MeasureException
from ddm.shift import Alphabet, Cylinder, CylinderSet

AB = Alphabet(("a", "b"))


def exception_message(message):
    return "measure exception " + message


@pytest.fixture
def measure_base():
    return MeasureBase(AB)


def test_constructor():
    measure_base = MeasureBase(AB)
    assert measure_base is not None
    assert isinstance(measure_base.lock, FakeLock)
    assert measure_base.logger.name == "ddm.measure"


def test_constructor_with_lock():
    assert isinstance(MeasureBase(AB, lock=True).lock, type(Lock()))
    lock = Lock()
    assert MeasureBase(AB, lock=lock).lock is lock
    with pytest.raises(ValueError):
        MeasureBase(AB, lock="yes")


@pytest.mark.parametrize("method, args", [
    ("phi_mass", (0, Cylinder(0, ("a",), AB))),
    ("total", ()),
    ("shifted", (1,)),
    ("describe", ())])
def test_not_implemented(measure_base, method, args):
    with pytest.raises(MeasureException) as excinfo:
        getattr(measure_base, method)(*args)
    assert str(excinfo.value).startswith(exception_message("Method '{}' not implemented".format(method)))
    assert excinfo.value.exit_code == 2


def test_defaults(measure_base):
    assert measure_base.is_consistent() is False
    assert measure_base.zero() == 0.0
    assert measure_base.phi_set_mass(0, CylinderSet.empty(AB)) == 0.0


def test_check_depth(measure_base):
    measure_base.check_depth(-1, Cylinder(0, ("a",), AB))
    with pytest.raises(MeasureException) as excinfo:
        measure_base.check_depth(1, Cylinder(2, ("a",), AB))
    assert str(excinfo.value).startswith(exception_message("depth 1 is positive"))
    with pytest.raises(MeasureException) as excinfo:
        measure_base.check_depth(-1, Cylinder(-2, ("a",), AB))
    assert str(excinfo.value).startswith(exception_message("cylinder m=-2;w=a starts before depth -1"))


class TestCache(unittest.TestCase):
    def setUp(self):
        self.measure = MeasureBase(AB, lock=True)
        self.calls = []

    def compute(self, value):
        def run():
            self.calls.append(value)
            return value
        return run

    def test_first_value_wins(self):
        self.assertEqual(self.measure.cached("k", self.compute(1)), 1)
        self.assertEqual(self.measure.cached("k", self.compute(2)), 1)
        self.assertEqual(self.calls, [1])

    def test_clear_cache(self):
        self.measure.cached("k", self.compute(1))
        self.measure.clear_cache()
        self.assertEqual(self.measure.cached("k", self.compute(2)), 2)
        self.assertEqual(self.calls, [1, 2])


if __name__ == '__main__':
    unittest.main()
