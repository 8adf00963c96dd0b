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

"""
Path measures P^m_x of a Markov system and the family φ_m(ν)(A) = ∫ P^m_x(A) dν(x), with the
consistency identities relating φ_{m-1}, φ_m, U* and the shift.
"""

import itertools

from ddm.markovsystem import PointMeasure, apply_U_star, exact_sum
from ddm.measurebase import MeasureBase, MeasureException
from ddm.shift import Cylinder, CylinderSet, shift_preimage

CONSISTENCY_TOLERANCE = 1e-12

PROPAGATION = "propagation"
RECURSION = "recursion"


def word_prob(sys, x, word):
    """
    Product p_{e_m}(x) p_{e_m+1}(w_{e_m} x) ... along the orbit of x
    :return: (probability, orbit endpoint or None when the probability is zero)
    """
    value = sys.one()
    for e in word:
        p = sys.p(e, x)
        if not p:
            return sys.zero(), None
        value = value * p
        x = sys.w(e, x)
    return value, x


def path_prob(sys, m, x, c, method=PROPAGATION):
    """
    P^m_x(c)
    :param sys: MarkovSystem
    :param m: depth where the path starts
    :param x: starting point
    :param c: Cylinder starting at index >= m
    :param method: how the coordinates between m and the start of c are summed out:
        "propagation" pushes δ_x forward with U*, "recursion" expands the |E|-ary tree of gap words
    """
    return path_integral(sys, m, x, c, None, method)


def path_integral(sys, m, x, c, f=None, method=PROPAGATION):
    """∫_c f(orbit endpoint after c) dP^m_x, with f = 1 when omitted"""
    if c.start < m:
        raise MeasureException("cylinder {} starts before depth {}".format(c, m))
    sys.cell(x)
    gap = c.start - m
    if method == RECURSION:
        return _recursive_integral(sys, gap, x, c.word, f)
    if method != PROPAGATION:
        raise MeasureException("unknown evaluation method '{}'".format(method))
    mu = PointMeasure.dirac(x, sys.one())
    for _ in range(gap):
        mu = apply_U_star(sys, mu)
    return exact_sum(weight * _weighted(sys, y, c.word, f) for y, weight in mu.atoms)


def _weighted(sys, x, word, f):
    value, end = word_prob(sys, x, word)
    if f is None or not value:
        return value
    return value * f(end)


def _recursive_integral(sys, gap, x, word, f):
    if gap == 0:
        return _weighted(sys, x, word, f)
    return exact_sum(p * _recursive_integral(sys, gap - 1, y, word, f) for _, p, y in sys.transitions(x) if p)


class MarkovPathMeasure(MeasureBase):
    """φ_m(ν) for a Markov system and a finitely supported initial distribution ν"""

    def __init__(self, sys, nu, logger_name='ddm.measure', lock=False):
        super().__init__(sys.alphabet, logger_name, lock)
        self.sys = sys
        self.nu = nu

    def zero(self):
        return self.sys.zero()

    def propagated(self, gap):
        """U*^gap ν, built from the shorter iterates"""
        if gap == 0:
            return self.nu
        return self.cached(("propagated", gap), lambda: apply_U_star(self.sys, self.propagated(gap - 1)))

    def phi_mass(self, m, cylinder):
        self.check_depth(m, cylinder)
        gap = cylinder.start - m

        def compute():
            return exact_sum(weight * word_prob(self.sys, x, cylinder.word)[0]
                             for x, weight in self.propagated(gap).atoms)
        return self.cached(("mass", gap, cylinder.word), compute)

    def total(self):
        return self.nu.total

    def shifted(self, k):
        if k < 0:
            raise MeasureException("shift k must be non negative")
        return MarkovPathMeasure(self.sys, self.propagated(k), logger_name=self.logger.name)

    def stationarity_residual(self):
        return self.cached(("stationarity",), lambda: apply_U_star(self.sys, self.nu).l1_distance(self.nu))

    def is_consistent(self):
        residual = self.stationarity_residual()
        if residual == 0:
            return True
        return self.sys.arithmetic == "float" and residual <= CONSISTENCY_TOLERANCE

    def describe(self):
        return {"mode": "markov", "system": self.sys.name, "initial": self.nu.to_dict()}


def phi_m_mass(sys, nu, m, s):
    """
    φ_m(ν)(s)
    :param sys: MarkovSystem
    :param nu: PointMeasure
    :param m: depth
    :param s: Cylinder or CylinderSet whose parts start at index >= m
    """
    return MarkovPathMeasure(sys, nu).phi_set_mass(m, s)


def _lhs_recursive(sys, nu, m, q):
    # φ_m(ν) summed over gap words explicitly, independent of the U* propagation path
    return exact_sum(weight * path_integral(sys, m, x, q, None, RECURSION) for x, weight in nu.atoms)


def shm_residuals(sys, nu, m, test_cylinders):
    """
    Residuals of φ_{m-1}(ν)(Q) = φ_m(U*ν)(Q) = φ_m(ν)(S^{-1}Q) on A_m, of
    φ_{m-1}(ν)(Q) = φ_m(ν)(S^{-1}Q) on A_{m-1}, and of φ_{m-1}(ν) = φ_m(ν) on A_m
    (the last one vanishes only for stationary ν)
    :return: dict of maximal absolute residuals and the number of cylinders checked per identity
    """
    measure = MarkovPathMeasure(sys, nu)
    moved = MarkovPathMeasure(sys, apply_U_star(sys, nu))
    out = {"u_star": 0, "shift": 0, "shift_past": 0, "kolmogorov": 0, "checked_a_m": 0, "checked_a_m_minus_1": 0}
    for q in test_cylinders:
        if q.start < m - 1:
            continue
        lhs = _lhs_recursive(sys, nu, m - 1, q)
        shifted = measure.phi_mass(m, shift_preimage(q))
        out["shift_past"] = max(out["shift_past"], abs(lhs - shifted))
        out["checked_a_m_minus_1"] += 1
        if q.start >= m:
            out["u_star"] = max(out["u_star"], abs(lhs - moved.phi_mass(m, q)))
            out["shift"] = max(out["shift"], abs(lhs - shifted))
            out["kolmogorov"] = max(out["kolmogorov"], abs(lhs - measure.phi_mass(m, q)))
            out["checked_a_m"] += 1
    return out


def kolmogorov_residual(sys, nu, m, test_cylinders):
    """max |φ_{m-1}(ν)(Q) - φ_m(ν)(Q)| over the cylinders in A_m"""
    return shm_residuals(sys, nu, m, test_cylinders)["kolmogorov"]


def _in_rectangle(sys, x, cells):
    if cells is None:
        return True
    if isinstance(cells, tuple):
        a, b = cells
        x = float(x)
        if x == a or x == b:
            raise MeasureException("atom {!r} lies on the boundary of [{}, {}]".format(x, a, b))
        return a < x < b
    return sys.cell(x) in cells


def tilde_phi_integral(sys, nu, m, cells, s, f=None, method=PROPAGATION):
    """
    ∫_{A×s} f dφ̃_m(ν), f a function of the orbit endpoint after the cylinder (f = 1 when omitted)
    :param cells: None for all of K, a set of state indices, or an open segment (a, b) of an interval space
    :param s: Cylinder or CylinderSet starting at index >= m
    """
    parts = s.parts if isinstance(s, CylinderSet) else [s]
    total = sys.zero()
    for x, weight in nu.atoms:
        if not _in_rectangle(sys, x, cells):
            continue
        for part in parts:
            total = total + weight * path_integral(sys, m, x, part, f, method)
    return total


def tilde_phi_rectangle(sys, nu, m, cells, s):
    """φ̃_m(ν)(A×s) = ∫_A P^m_x(s) dν(x)"""
    return tilde_phi_integral(sys, nu, m, cells, s)


def rectangle_residuals(sys, nu, m, test_cylinders):
    """max |φ̃_{m-1}(ν)(K×Q) - φ̃_m(U*ν)(K×Q)| over the cylinders in A_m"""
    moved = apply_U_star(sys, nu)
    worst = 0
    for q in test_cylinders:
        if q.start < m:
            continue
        lhs = tilde_phi_integral(sys, nu, m - 1, None, q, method=RECURSION)
        rhs = tilde_phi_rectangle(sys, moved, m, None, q)
        worst = max(worst, abs(lhs - rhs))
    return worst


def cylinders_up_to(alphabet, max_length, start=0):
    """All cylinders _start[w] with 1 <= |w| <= max_length, shortest first"""
    out = []
    for n in range(1, max_length + 1):
        out.extend(Cylinder(start, w, alphabet) for w in itertools.product(alphabet.symbols, repeat=n))
    return out