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


class FakeLock:
    """Implements a fake lock that can be called with the "with" statement or acquire, release methods"""
    def __enter__(self):
        pass

    def __exit__(self, exc_type, exc_val, exc_tb):
        pass

    def acquire(self):
        pass

    def release(self):
        pass


ARITHMETICS = ("float", "rational")

# relative slack under which two float costs count as a tie
TIE_TOLERANCE = 1e-15


def is_exact(value):
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def to_number(value, arithmetic="float"):
    """
    Converts a config value into the working number type
    :param value: int, float, Fraction or a string as "3/10", "0.25"
    :param arithmetic: "float" or "rational"
    :return: float or Fraction
    """
    if arithmetic not in ARITHMETICS:
        raise ValueError("arithmetic must be one of {}".format(", ".join(ARITHMETICS)))
    if isinstance(value, bool):
        raise ValueError("boolean is not a number")
    if arithmetic == "rational":
        if isinstance(value, float):
            # exact binary value would be surprising; go through the decimal text
            return Fraction(repr(value))
        return Fraction(value)
    if isinstance(value, str):
        return float(Fraction(value))
    return float(value)


def strictly_less(a, b):
    """a < b beyond the tie tolerance (exact comparison for rationals)"""
    if is_exact(a) and is_exact(b):
        return a < b
    return a < b - TIE_TOLERANCE * max(abs(a), abs(b))


def close(a, b, tol):
    if is_exact(a) and is_exact(b):
        return a == b or abs(a - b) <= tol
    return abs(a - b) <= tol


def safe_log(p):
    """Natural log with log(0) = -inf"""
    if p <= 0:
        return -math.inf
    return math.log(p)


def jsonable(value):
    """
    Normalises numbers and containers for JSON/YAML output.
    Fractions become "p/q" strings, infinities and nan become strings, tuples become lists
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return "{}/{}".format(value.numerator, value.denominator)
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isinf(value):
            return "-inf" if value < 0 else "inf"
        if math.isnan(value):
            return "nan"
        # plain float, numpy scalars included
        return float(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return jsonable(value.to_dict())
    if hasattr(value, "item"):
        # numpy scalar
        return jsonable(value.item())
    return str(value)
