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

import math
from fractions import Fraction

import numpy as np
import pytest

from ddm.common_utils import FakeLock, close, is_exact, jsonable, safe_log, strictly_less, to_number


def test_fake_lock():
    lock = FakeLock()
    with lock:
        pass
    lock.acquire()
    lock.release()


@pytest.mark.parametrize("value, arithmetic, expected", [
    ("3/10", "rational", Fraction(3, 10)),
    (0.1, "rational", Fraction(1, 10)),
    (2, "rational", Fraction(2)),
    ("3/10", "float", 0.3),
    ("0.25", "float", 0.25),
    (Fraction(1, 4), "float", 0.25)])
def test_to_number(value, arithmetic, expected):
    result = to_number(value, arithmetic)
    assert result == expected
    assert is_exact(result) == (arithmetic == "rational")


@pytest.mark.parametrize("value, arithmetic", [(True, "float"), ("x", "float"), ("1", "decimal")])
def test_to_number_invalid(value, arithmetic):
    with pytest.raises(ValueError):
        to_number(value, arithmetic)


def test_comparisons():
    assert strictly_less(Fraction(1, 3), Fraction(1, 2))
    assert not strictly_less(1.0, 1.0 + 1e-17)
    assert strictly_less(0.5, 0.6)
    assert close(Fraction(1, 2), 0.5, 1e-12)
    assert not close(Fraction(1, 2), Fraction(1, 3), 0)


def test_safe_log():
    assert safe_log(0) == -math.inf
    assert safe_log(Fraction(1)) == 0.0
    assert safe_log(math.e) == pytest.approx(1.0)


def test_jsonable():
    assert jsonable({"a": (Fraction(3, 4), Fraction(2)), 1: np.float64(0.5), "b": math.inf}) == \
        {"a": ["3/4", "2"], "1": 0.5, "b": "inf"}
    assert jsonable(float("nan")) == "nan"
    assert jsonable(True) is True
    assert jsonable(np.int64(3)) == 3
