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

from ddm.measurebase import MeasureBase, MeasureException


class DiracSequenceMeasure(MeasureBase):
    """
    φ_0 = Dirac mass at one two-sided sequence σ', given by a repeating pattern and a phase
    (σ'_i = pattern[(i + phase) mod period]) plus finitely many pinned coordinates.
    φ_m(_k[w]) = φ_0(_{k-m}[w]) is decided by comparing symbols, no Markov system involved
    """

    def __init__(self, alphabet, pattern, phase=0, overrides=None, logger_name='ddm.measure', lock=False):
        super().__init__(alphabet, logger_name, lock)
        self.pattern = tuple(pattern)
        if not self.pattern:
            raise MeasureException("sequence pattern must not be empty")
        self.phase = int(phase) % len(self.pattern)
        self.overrides = {int(i): s for i, s in (overrides or {}).items()}
        for s in self.pattern + tuple(self.overrides.values()):
            if s not in alphabet:
                raise MeasureException("sequence symbol '{}' is not in the alphabet".format(s))

    def symbol_at(self, index):
        if index in self.overrides:
            return self.overrides[index]
        return self.pattern[(index + self.phase) % len(self.pattern)]

    def zero(self):
        return 0

    def phi_mass(self, m, cylinder):
        self.check_depth(m, cylinder)
        for index in range(cylinder.start, cylinder.end + 1):
            if self.symbol_at(index - m) != cylinder.symbol_at(index):
                return 0
        return 1

    def total(self):
        return 1

    def shifted(self, k):
        if k < 0:
            raise MeasureException("shift k must be non negative")
        # new sequence is σ'_{i+k}
        return DiracSequenceMeasure(self.alphabet, self.pattern, self.phase + k,
                                    {i - k: s for i, s in self.overrides.items()}, logger_name=self.logger.name)

    def is_consistent(self):
        symbols = set(self.pattern) | set(self.overrides.values())
        return len(symbols) == 1

    def describe(self):
        return {
            "mode": "dirac-sequence",
            "pattern": list(self.pattern),
            "phase": self.phase,
            "overrides": {str(i): s for i, s in sorted(self.overrides.items())},
        }
