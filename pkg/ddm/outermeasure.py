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
The outer measure Φ(Q) = inf Σ_m φ_m(A_m) over covers of Q by sets A_m of Δ_m, restricted to a
finite coordinate window, computed as a minimum cost disjoint cylinder cover.

The dynamic program works on cylinder nodes. A node is either left uncovered (allowed when it
misses the query), charged whole at one depth m <= its start, or split by one more past or
future coordinate. At the root the whole space is split at any coordinate of the window. Every
disjoint cover by window cylinders is reachable this way, which the brute-force oracle below
cross-checks on small windows.
"""

import itertools
import logging
import math

from ddm.common_utils import ARITHMETICS, close, is_exact, strictly_less
from ddm.markovsystem import MarkovSystem, apply_U_star, initial_uniform, stationary_distribution
from ddm.measurebase import MeasureBase
from ddm.measurepath import MarkovPathMeasure, cylinders_up_to
from ddm.shift import (Cylinder, CylinderSet, Direction, Relation, disjointify, format_cylinder_set, refine,
                       relation, shift_preimage, window_points)

__all__ = ["CoverException", "CoverParams", "PhiEstimate", "StarEstimate", "phi_estimate", "phi_bruteforce",
           "phi_shifted", "phi_star_estimate", "invariance_residual", "npr_report", "verify_cover",
           "superadditivity_check", "absolute_continuity_check", "positivity_evidence"]

DEFAULT_NODE_BUDGET = 1000000
ORACLE_MAX_BITS = 12
ORACLE_STATE_BUDGET = 200000
CHAIN_SLACK = 1e-9
FLOAT_TOLERANCE = 1e-12

logger = logging.getLogger("ddm.cover")


class CoverException(Exception):

    def __init__(self, message, exit_code=2, best_bound=None):
        self.exit_code = exit_code
        self.best_bound = best_bound
        Exception.__init__(self, "cover exception " + str(message))


class CoverParams(object):

    def __init__(self, past_depth=4, future_depth=0, node_budget=DEFAULT_NODE_BUDGET, arithmetic="float"):
        if isinstance(past_depth, bool) or not isinstance(past_depth, int) or past_depth < 0:
            raise CoverException("past_depth must be a non negative integer")
        if isinstance(future_depth, bool) or not isinstance(future_depth, int) or future_depth < 0:
            raise CoverException("future_depth must be a non negative integer")
        if not node_budget or node_budget <= 0:
            raise CoverException("node_budget must be positive")
        if arithmetic not in ARITHMETICS:
            raise CoverException("arithmetic must be one of {}".format(", ".join(ARITHMETICS)))
        self.past_depth = past_depth
        self.future_depth = future_depth
        self.node_budget = node_budget
        self.arithmetic = arithmetic

    def with_past_depth(self, past_depth):
        return CoverParams(past_depth, self.future_depth, self.node_budget, self.arithmetic)

    def window(self, query):
        """Coordinate window [lo, hi] explored for the query"""
        span = query.window()
        end = span[1] if span else 0
        return -self.past_depth, end + self.future_depth

    def to_dict(self):
        return {"past_depth": self.past_depth, "future_depth": self.future_depth, "node_budget": self.node_budget,
                "arithmetic": self.arithmetic}


def _cover_dict(cover):
    return [{"depth": m, "set": format_cylinder_set(s)} for m, s in cover]


class PhiEstimate(object):

    def __init__(self, value, params, optimal_cover, profile, nodes=0, method="dp"):
        self.value = value
        self.params = params
        self.optimal_cover = optimal_cover
        self.profile = profile
        self.nodes = nodes
        self.method = method

    @property
    def converged(self):
        if len(self.profile) < 2:
            return True
        return close(self.profile[-1], self.profile[-2], FLOAT_TOLERANCE)

    def cover_cost(self, measure):
        value = measure.zero()
        for m, s in self.optimal_cover:
            value = value + measure.phi_set_mass(m, s)
        return value

    def to_dict(self):
        return {
            "value": self.value,
            "params": self.params.to_dict(),
            "optimal_cover": _cover_dict(self.optimal_cover),
            "profile": list(self.profile),
            "converged": self.converged,
            "nodes": self.nodes,
            "method": self.method,
        }


def as_measure(source, nu=None):
    """A MeasureBase from either a measure or a Markov system with an initial distribution"""
    if isinstance(source, MeasureBase):
        return source
    if isinstance(source, MarkovSystem):
        if nu is None:
            raise CoverException("a Markov system needs an initial distribution")
        return MarkovPathMeasure(source, nu)
    raise CoverException("cannot evaluate measures on {!r}".format(source))


def _group_cover(alphabet, pieces):
    by_depth = {}
    for m, c in pieces:
        by_depth.setdefault(m, []).append(c)
    return [(m, CylinderSet(alphabet, by_depth[m], check=False)) for m in sorted(by_depth, reverse=True)]


class _CoverSearch(object):

    def __init__(self, measure, query, lo, hi, node_budget):
        self.measure = measure
        self.query = query
        self.lo = lo
        self.hi = hi
        self.node_budget = node_budget
        self.memo = {}
        self.best = measure.total()

    def direct(self, node):
        best = None
        # shallow depths first, so ties keep the shallowest charge
        for m in range(min(node.start, 0), self.lo - 1, -1):
            cost = self.measure.phi_mass(m, node)
            if best is None or strictly_less(cost, best[0]):
                best = (cost, m)
        return best

    def _children_cost(self, children, bound):
        total = self.measure.zero()
        for child in children:
            total = total + self.cost(child)
            if not strictly_less(total, bound):
                return None
        return total

    def cost(self, node):
        key = (node.start, node.word)
        if key in self.memo:
            return self.memo[key][0]
        if len(self.memo) >= self.node_budget:
            raise CoverException("node budget of {} exhausted".format(self.node_budget), best_bound=self.best)
        if not self.query.intersects(node):
            self.memo[key] = (self.measure.zero(), ("free",))
            return self.memo[key][0]
        cost, m = self.direct(node)
        plan = ("charge", m)
        if cost:
            if node.start - 1 >= self.lo:
                total = self._children_cost(refine(node, Direction.PAST), cost)
                if total is not None:
                    cost, plan = total, (Direction.PAST,)
            if cost and node.end + 1 <= self.hi:
                total = self._children_cost(refine(node, Direction.FUTURE), cost)
                if total is not None:
                    cost, plan = total, (Direction.FUTURE,)
        self.memo[key] = (cost, plan)
        return cost

    def root(self):
        """(value, plan) for the whole query"""
        if self.query.is_empty():
            return self.measure.zero(), ("free",)
        value, plan = self.best, ("sigma",)
        for j in range(self.lo, self.hi + 1):
            if not value:
                break
            children = [Cylinder(j, (e,), self.query.alphabet) for e in self.query.alphabet]
            total = self._children_cost(children, value)
            if total is not None:
                value, plan = total, ("split", j)
                self.best = value
        return value, plan

    def pieces(self, node):
        cost, plan = self.memo[(node.start, node.word)]
        if plan[0] == "free":
            return []
        if plan[0] == "charge":
            return [(plan[1], node)]
        out = []
        for child in refine(node, plan[0], self.query.alphabet):
            out.extend(self.pieces(child))
        return out

    def cover(self, plan):
        alphabet = self.query.alphabet
        if plan[0] == "free":
            return []
        if plan[0] == "sigma":
            return [(0, CylinderSet.full(alphabet, 0))]
        pieces = []
        for e in alphabet:
            pieces.extend(self.pieces(Cylinder(plan[1], (e,), alphabet)))
        return _group_cover(alphabet, pieces)


def _consistent_cover(measure, query, lo):
    # Carathéodory collapse: every cover costs at least the mass of the query, the query itself attains it
    if any(p.start < lo for p in query.parts):
        return None
    pieces = [(min(p.start, 0), p) for p in query.parts]
    value = measure.zero()
    for m, p in pieces:
        value = value + measure.phi_mass(m, p)
    return value, _group_cover(query.alphabet, pieces)


def _estimate_at(measure, query, params, fast_path=True):
    lo, hi = params.window(query)
    if fast_path and measure.is_consistent():
        found = _consistent_cover(measure, query, lo)
        if found is not None:
            return found[0], found[1], 0, "consistent"
    search = _CoverSearch(measure, query, lo, hi, params.node_budget)
    value, plan = search.root()
    measure.logger.debug("cover search on [{}, {}] visited {} nodes".format(lo, hi, len(search.memo)))
    return value, search.cover(plan), len(search.memo), "dp"


def phi_estimate(source, nu, query, params, profile=True, fast_path=True):
    """
    Upper estimate of Φ(query) by the minimum cost cover inside the window of params
    :param source: MeasureBase, or MarkovSystem together with nu
    :param nu: PointMeasure, ignored for measures
    :param query: CylinderSet
    :param params: CoverParams
    :param profile: also evaluate every smaller past depth 0..M
    :param fast_path: answer consistent families by the mass of the query; False always runs the cover search
    :return: PhiEstimate; raises CoverException with best_bound when the node budget runs out
    """
    measure = as_measure(source, nu)
    if query.alphabet != measure.alphabet:
        raise CoverException("query alphabet does not match the measure")
    values = []
    if profile:
        for depth in range(params.past_depth):
            values.append(_estimate_at(measure, query, params.with_past_depth(depth), fast_path)[0])
    value, cover, nodes, method = _estimate_at(measure, query, params, fast_path)
    values.append(value)
    logger.info("phi estimate {} at past depth {} ({})".format(value, params.past_depth, method))
    return PhiEstimate(value, params, cover, values, nodes, method)


def verify_cover(source, nu, query, cover):
    """
    Checks a cover certificate
    :return: dict with disjoint, covers, depths_ok and the recomputed cost
    """
    measure = as_measure(source, nu)
    pieces = [(m, p) for m, s in cover for p in s.parts]
    disjoint = all(relation(a, b) is Relation.DISJOINT for (_, a), (_, b) in itertools.combinations(pieces, 2))
    depths_ok = all(m <= 0 and p.start >= m for m, p in pieces)
    union = CylinderSet.from_cylinders(query.alphabet, [p for _, p in pieces])
    cost = measure.zero()
    for m, p in pieces:
        cost = cost + measure.phi_mass(m, p)
    return {"disjoint": disjoint, "covers": union.contains(query), "depths_ok": depths_ok, "cost": cost}


def _point_masks(alphabet, lo, hi):
    """Bit masks of the window points in every cylinder inside [lo, hi], keyed by (start, word)"""
    n = len(alphabet)
    width = hi - lo + 1
    masks = {}
    for a in range(lo, hi + 1):
        for b in range(a, hi + 1):
            before, after = a - lo, hi - b
            for word in itertools.product(range(n), repeat=b - a + 1):
                inner = 0
                for s in word:
                    inner = inner * n + s
                bits = 0
                for head in range(n ** before):
                    base = (head * n ** (b - a + 1) + inner) * n ** after
                    for tail in range(n ** after):
                        bits |= 1 << (base + tail)
                masks[(a, tuple(alphabet.symbols[s] for s in word))] = bits
    return masks, n ** width


def phi_bruteforce(source, nu, query, window, max_bits=ORACLE_MAX_BITS, state_budget=ORACLE_STATE_BUDGET):
    """
    Exact minimum over every finite cover of the query by cylinders inside the window, each
    cylinder charged at its cheapest admissible depth; overlapping covers are allowed
    :param window: (lo, hi) coordinates, lo <= 0 is the deepest charge depth
    :return: PhiEstimate with method "bruteforce"
    """
    measure = as_measure(source, nu)
    alphabet = query.alphabet
    lo, hi = window
    if lo > 0 or hi < lo:
        raise CoverException("oracle window [{}, {}] is not valid".format(lo, hi))
    if (hi - lo + 1) * math.log2(max(len(alphabet), 2)) > max_bits:
        raise CoverException("oracle window [{}, {}] is too wide for brute force".format(lo, hi))
    span = query.window() or (0, 0)
    params = CoverParams(past_depth=-lo, future_depth=max(hi - span[1], 0))
    masks, size = _point_masks(alphabet, lo, hi)
    everything = (1 << size) - 1
    target = 0
    for i, point in enumerate(window_points(alphabet, lo, hi)):
        if query.intersects(Cylinder(lo, point, alphabet)):
            target |= 1 << i

    costs = {}
    for key in masks:
        c = Cylinder(key[0], key[1], alphabet)
        best = None
        for m in range(min(c.start, 0), lo - 1, -1):
            value = measure.phi_mass(m, c)
            if best is None or strictly_less(value, best[0]):
                best = (value, m)
        costs[key] = best
    total = measure.total()
    # (cost, depth, cylinder or None for the whole space, mask)
    kept = [(total, 0, None, everything)]
    for (a, word), (cost, depth) in costs.items():
        if not masks[(a, word)] & target:
            continue
        dominated = not strictly_less(cost, total) and len(alphabet) > 1
        for a2 in range(a, a + len(word)):
            for b2 in range(a2, a + len(word)):
                if dominated or (a2, b2) == (a, a + len(word) - 1):
                    continue
                # a shorter word on a sub-window is a superset
                dominated = not strictly_less(cost, costs[(a2, word[a2 - a:b2 - a + 1])][0])
        if not dominated:
            kept.append((cost, depth, Cylinder(a, word, alphabet), masks[(a, word)]))

    chosen = [k for k in kept if not k[0] and k[3] & target]
    remaining = target
    for k in chosen:
        remaining &= ~k[3]
    by_point = {}
    for k in kept:
        if k[0]:
            bits = k[3] & remaining
            while bits:
                low = bits & -bits
                by_point.setdefault(low.bit_length() - 1, []).append(k)
                bits ^= low
    memo = {}

    def solve(uncovered):
        if not uncovered:
            return measure.zero(), ()
        if uncovered in memo:
            return memo[uncovered]
        if len(memo) >= state_budget:
            raise CoverException("oracle state budget of {} exhausted".format(state_budget))
        lowest = (uncovered & -uncovered).bit_length() - 1
        best = None
        for k in by_point[lowest]:
            sub_cost, sub_choice = solve(uncovered & ~k[3])
            candidate = k[0] + sub_cost
            if best is None or strictly_less(candidate, best[0]):
                best = (candidate, (k,) + sub_choice)
        memo[uncovered] = best
        return best

    value, choice = solve(remaining)
    grouped = {}
    for cost, depth, c, _ in chosen + list(choice):
        parts = CylinderSet.full(alphabet, 0).parts if c is None else [c]
        grouped.setdefault(depth, []).extend(parts)
    cover = disjointify((m, CylinderSet.from_cylinders(alphabet, cs)) for m, cs in grouped.items())
    cover = [(m, s) for m, s in cover if not s.is_empty()]
    logger.debug("oracle on [{}, {}] explored {} states".format(lo, hi, len(memo)))
    return PhiEstimate(value, params, cover, [value], len(memo), "bruteforce")


def phi_shifted(source, nu, k, query, params):
    """Estimate of Φ_{(-k)}(query): the family with U*^k ν (or φ_{-k} re-anchored) as initial measure"""
    if k < 0:
        raise CoverException("k must be non negative")
    return phi_estimate(as_measure(source, nu).shifted(k), None, query, params)


class StarEstimate(object):

    def __init__(self, values, estimates, matched_depth):
        self.values = values
        self.estimates = estimates
        self.matched_depth = matched_depth

    @property
    def increments(self):
        return [b - a for a, b in zip(self.values, self.values[1:])]

    @property
    def violations(self):
        out = []
        for k, (a, b) in enumerate(zip(self.values, self.values[1:])):
            if (is_exact(a) and is_exact(b) and b < a) or b < a - FLOAT_TOLERANCE:
                out.append(k + 1)
        return out

    @property
    def monotone(self):
        return not self.violations

    @property
    def last_increment(self):
        return self.increments[-1] if len(self.values) > 1 else 0

    def to_dict(self):
        return {
            "values": list(self.values),
            "increments": self.increments,
            "monotone": self.monotone,
            "violations": self.violations,
            "last_increment": self.last_increment,
            "matched_depth": self.matched_depth,
            "past_depths": [e.params.past_depth for e in self.estimates],
        }


def phi_star_estimate(source, nu, query, params, k_max, matched_depth=False):
    """
    Φ_{(-k)}(query) for k = 0..k_max
    :param matched_depth: evaluate Φ_{(-k)} at past depth M-k, where the shift chain
        Φ_{(-k)} <= Φ_{(-k-1)} holds for the window estimates as well; needs k_max <= M
    :return: StarEstimate
    """
    if k_max < 0:
        raise CoverException("k_max must be non negative")
    if matched_depth and k_max > params.past_depth:
        raise CoverException("matched depth needs k_max <= past_depth")
    measure = as_measure(source, nu)
    estimates = []
    for k in range(k_max + 1):
        at = params.with_past_depth(params.past_depth - k) if matched_depth else params
        estimates.append(phi_estimate(measure.shifted(k), None, query, at, profile=False))
    star = StarEstimate([e.value for e in estimates], estimates, matched_depth)
    if not star.monotone:
        logger.warning("phi star sequence decreases at k = {}".format(star.violations))
    return star


def invariance_residual(source, nu, query, params):
    """
    Compares Φ̂(Q) at past depth M+1, Φ̂(S^{-1}Q) at M and Φ̂_{(-1)}(Q) at M; at these depths the
    window estimates satisfy Φ̂(Q) <= Φ̂(S^{-1}Q) <= Φ̂_{(-1)}(Q)
    """
    measure = as_measure(source, nu)
    phi_query = phi_estimate(measure, None, query, params.with_past_depth(params.past_depth + 1), False).value
    phi_preimage = phi_estimate(measure, None, shift_preimage(query), params, False).value
    phi_minus_one = phi_estimate(measure.shifted(1), None, query, params, False).value
    lower_slack = phi_preimage - phi_query
    upper_slack = phi_minus_one - phi_preimage
    return {
        "phi_query": phi_query,
        "phi_preimage": phi_preimage,
        "phi_minus_one": phi_minus_one,
        "residual": abs(phi_query - phi_preimage),
        "lower_slack": lower_slack,
        "upper_slack": upper_slack,
        "lower_ordered": lower_slack >= -CHAIN_SLACK,
        "upper_ordered": upper_slack >= -CHAIN_SLACK,
    }


def _oracle_certifies(measure, query, params, value):
    try:
        oracle = phi_bruteforce(measure, None, query, params.window(query))
    except CoverException:
        return False
    return close(oracle.value, value, FLOAT_TOLERANCE)


def _invariance_defect(measure, family):
    if isinstance(measure, MarkovPathMeasure):
        return apply_U_star(measure.sys, measure.nu).l1_distance(measure.nu)
    worst = 0
    for c in family:
        if c.start >= 0:
            worst = max(worst, abs(measure.phi_mass(0, shift_preimage(c)) - measure.phi_mass(0, c)))
    return worst


def npr_report(source, nu, params, cylinder_family):
    """
    Bounds relating Φ(Σ) to the family: Φ(Σ) <= 1, |φ_m(A) - φ_0(A)| <= 1 - Φ(Σ) on A_0, and
    Φ(Σ) = 1 exactly for invariant initial data
    :param cylinder_family: cylinders starting at index >= 0
    """
    measure = as_measure(source, nu)
    total = measure.total()
    sigma = CylinderSet.full(measure.alphabet, 0)
    estimate = phi_estimate(measure, None, sigma, params)
    phi_sigma = estimate.value
    certified = measure.is_consistent() or _oracle_certifies(measure, sigma, params, phi_sigma)
    deviation = 0
    for c in cylinder_family:
        if c.start < 0:
            continue
        base = measure.phi_mass(0, c)
        for m in range(-params.past_depth, 1):
            deviation = max(deviation, abs(measure.phi_mass(m, c) - base))
    bound = total - phi_sigma
    if deviation <= bound + FLOAT_TOLERANCE:
        bound_verdict = "satisfied"
    elif certified:
        bound_verdict = "violated"
    else:
        bound_verdict = "inconclusive"
    defect = _invariance_defect(measure, cylinder_family)
    invariant = close(defect, 0, FLOAT_TOLERANCE)
    full = close(phi_sigma, total, FLOAT_TOLERANCE)
    if invariant == full:
        equivalence = "affirmed"
    elif invariant and certified:
        equivalence = "contradicted"
    else:
        equivalence = "inconclusive"
    return {
        "phi_sigma": phi_sigma,
        "sigma_at_most_total": phi_sigma <= total + FLOAT_TOLERANCE,
        "certified": certified,
        "max_deviation": deviation,
        "deviation_bound": bound,
        "bound_verdict": bound_verdict,
        "invariance_defect": defect,
        "equivalence": equivalence,
        "estimate": estimate.to_dict(),
    }


def superadditivity_check(sys, nu1, nu2, alpha, query, params):
    """Φ(αν_1 + (1-α)ν_2) >= αΦ(ν_1) + (1-α)Φ(ν_2), estimated at matched params"""
    if not 0 <= alpha <= 1:
        raise CoverException("alpha must lie in [0, 1]")
    mixture = nu1.scaled(alpha).plus(nu2.scaled(1 - alpha))
    values = {}
    certified = True
    for label, nu in (("mixture", mixture), ("first", nu1), ("second", nu2)):
        measure = MarkovPathMeasure(sys, nu)
        values[label] = phi_estimate(measure, None, query, params, False).value
        certified = certified and (measure.is_consistent()
                                   or _oracle_certifies(measure, query, params, values[label]))
    lhs = values["mixture"]
    rhs = alpha * values["first"] + (1 - alpha) * values["second"]
    holds = lhs >= rhs - CHAIN_SLACK
    return {"lhs": lhs, "rhs": rhs, "certified": certified, "holds": holds,
            "verdict": "holds" if holds else ("violated" if certified else "inconclusive")}


def absolute_continuity_check(sys, nu1, nu2, params, max_length=2):
    """
    With supp ν_1 inside supp ν_2, cylinders null for Φ(ν_2) must be null for Φ(ν_1)
    :return: dict with the number of cylinders checked, null ones and suspects
    """
    support = set(nu2.support())
    if not set(nu1.support()) <= support:
        raise CoverException("first distribution is not dominated by the second")
    first = MarkovPathMeasure(sys, nu1)
    second = MarkovPathMeasure(sys, nu2)
    checked, null, suspects = 0, 0, []
    for c in cylinders_up_to(sys.alphabet, max_length):
        query = CylinderSet(sys.alphabet, [c])
        checked += 1
        if phi_estimate(second, None, query, params, False).value:
            continue
        null += 1
        if phi_estimate(first, None, query, params, False).value:
            suspects.append(format_cylinder_set(query))
    return {"checked": checked, "null": null, "suspects": suspects}


def positivity_evidence(sys, params):
    """
    Finite chains: uniform initial distribution on the base points of the stationary support and
    the estimate of its Φ(Σ)
    """
    if sys.space.kind != "points":
        raise CoverException("positivity evidence needs a finite point space")
    stationary = stationary_distribution(sys).measure
    states = sorted(set(sys.cell(x) for x in stationary.support()))
    nu = initial_uniform(sys, states)
    measure = MarkovPathMeasure(sys, nu)
    sigma = CylinderSet.full(sys.alphabet, 0)
    estimate = phi_estimate(measure, None, sigma, params)
    return {
        "support_states": states,
        "initial": nu.to_dict(),
        "phi_sigma": estimate.value,
        "positive": estimate.value > 0,
        "certified": measure.is_consistent() or _oracle_certifies(measure, sigma, params, estimate.value),
        "profile": estimate.profile,
    }

