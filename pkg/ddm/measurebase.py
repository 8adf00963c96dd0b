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

import logging
from threading import Lock

from ddm.common_utils import FakeLock
from ddm.shift import CylinderSet


class MeasureException(Exception):

    def __init__(self, message, exit_code=2):
        self.exit_code = exit_code
        Exception.__init__(self, "measure exception " + str(message))


class MeasureBase(object):
    """
    A family (φ_m)_{m<=0} with φ_m = φ_0 ∘ S^m, evaluated on cylinders.
    Subclasses provide φ_m on a single cylinder; set masses, caching and locking live here
    """

    def __init__(self, alphabet, logger_name='ddm.measure', lock=False):
        """
        Constructor of MeasureBase
        :param alphabet: Alphabet of the shift space
        :param logger_name: logging name
        :param lock: Used to protect the evaluation cache when several threads share the instance:
            False, None: Do not protect, this object will only be accessed by one thread
            True: This object needs to be protected by several threads accessing.
            Lock object. Use this Lock for the threads access protection
        """
        self.alphabet = alphabet
        self.logger = logging.getLogger(logger_name)
        self._cache = {}
        if not lock:
            self.lock = FakeLock()
        elif lock is True:
            self.lock = Lock()
        elif isinstance(lock, type(Lock())):
            self.lock = lock
        else:
            raise ValueError("lock parameter must be a Lock class or boolean")

    def phi_mass(self, m, cylinder):
        """
        φ_m of one cylinder
        :param m: depth, the cylinder must start at index >= m
        :param cylinder: Cylinder
        :return: mass, float or exact number
        """
        raise MeasureException("Method 'phi_mass' not implemented")

    def total(self):
        """φ_m(Σ), the same for every m"""
        raise MeasureException("Method 'total' not implemented")

    def shifted(self, k):
        """Family re-anchored so that its φ_0 is the present φ_{-k}; used for Φ_{(-k)}"""
        raise MeasureException("Method 'shifted' not implemented")

    def describe(self):
        raise MeasureException("Method 'describe' not implemented")

    def is_consistent(self):
        """True when φ_{m-1} = φ_m on A_m is known to hold for every m"""
        return False

    def zero(self):
        return 0.0

    def check_depth(self, m, cylinder):
        if m > 0:
            raise MeasureException("depth {} is positive".format(m))
        if cylinder.start < m:
            raise MeasureException("cylinder {} starts before depth {}".format(cylinder, m))

    def phi_set_mass(self, m, cylinder_set):
        """φ_m of a disjoint union, summed in canonical part order"""
        if not isinstance(cylinder_set, CylinderSet):
            return self.phi_mass(m, cylinder_set)
        value = self.zero()
        for part in cylinder_set.parts:
            value = value + self.phi_mass(m, part)
        return value

    def cached(self, key, compute):
        """
        Pure function cache: computation runs outside the lock, the first stored value wins.
        Hits are equal to recomputation
        """
        with self.lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self.lock:
            return self._cache.setdefault(key, value)

    def clear_cache(self):
        with self.lock:
            self._cache.clear()
