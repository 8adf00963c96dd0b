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
Coding map of a Markov system by backward iteration, the energy u = log p_{σ_1}∘F, conditional
expectations on the past σ-algebras, martingale and Cauchy diagnostics, and the equilibrium
identities h + ∫u = 0 and U*F(Φ) = F(Φ).

Past words are tuples of edge symbols written oldest first: (σ_m, ..., σ_0).
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ddm.common_utils import safe_log
from ddm.markovsystem import (PointMeasure, apply_U_star, certified_rate, diameter, probability_lipschitz, simulate,
                              stationary_distribution)
from ddm.measurepath import RECURSION, MarkovPathMeasure, cylinders_up_to, tilde_phi_integral
from ddm.outermeasure import CoverParams, phi_estimate
from ddm.shift import Cylinder, CylinderSet

EXACT_CHAIN = "exact-chain"
ESTIMATE = "estimate"
ENTROPY_MODES = (EXACT_CHAIN, ESTIMATE)

BOUND_SLACK = 1e-12

logger = logging.getLogger("ddm.coding")


class CodingException(Exception):

    def __init__(self, message, exit_code=2):
        self.exit_code = exit_code
        Exception.__init__(self, "coding exception " + str(message))


class CodingResult(object):

    def __init__(self, point, error_bound, depth_used, admissible, rigorous=True):
        self.point = point
        self.error_bound = error_bound
        self.depth_used = depth_used
        self.admissible = admissible
        self.rigorous = rigorous

    def to_dict(self):
        return {"point": self.point, "error_bound": self.error_bound, "depth_used": self.depth_used,
                "admissible": self.admissible, "rigorous": self.rigorous}


class EnergyValue(object):

    def __init__(self, value, source, symbol):
        self.value = value
        self.source = source
        self.symbol = symbol

    @property
    def infinite(self):
        return self.value == -math.inf

    def to_dict(self):
        return {"value": self.value, "infinite": self.infinite, "next_symbol": self.symbol,
                "coding": self.source.to_dict()}


def _check_word(sys, word):
    word = tuple(word)
    if not word:
        raise CodingException("past word must not be empty")
    for s in word:
        if s not in sys.alphabet:
            raise CodingException("symbol '{}' is not an edge of the system".format(s))
    return word


def is_admissible(sys, word):
    """i(σ_{k+1}) = t(σ_k) along the word"""
    return all(sys.target(a) == sys.source(b) for a, b in zip(word, word[1:]))


def _compose(sys, word):
    x = sys.base_points[sys.source(word[0])]
    for e in word:
        x = sys.w(e, x)
    return x


def coding_points(sys, word):
    """[F_0, F_{-1}, ...]: coding points of the suffixes (σ_0), (σ_{-1}, σ_0), ... of an admissible word"""
    word = _check_word(sys, word)
    return [_compose(sys, word[len(word) - k:]) for k in range(1, len(word) + 1)]


def coding_point(sys, word):
    """
    F_m = w_{σ_0}∘...∘w_{σ_m}(x_{i(σ_m)}) for the past word (σ_m, ..., σ_0)
    :return: CodingResult; an inadmissible word gives the base point of t(σ_0)
    """
    word = _check_word(sys, word)
    depth = 1 - len(word)
    if not is_admissible(sys, word):
        return CodingResult(sys.base_points[sys.target(word[-1])], 0, depth, False)
    point = _compose(sys, word)
    if sys.is_finite_chain():
        return CodingResult(point, 0, depth, True)
    rate = certified_rate(sys)
    if rate is not None:
        return CodingResult(point, rate ** len(word) * diameter(sys), depth, True)
    # no contraction available, report the last step only
    displacement = sys.space.distance(point, _compose(sys, word[1:])) if len(word) > 1 else diameter(sys)
    return CodingResult(point, displacement, depth, True, rigorous=False)


def energy_u(sys, word, next_symbol):
    """u = log p_{σ_1}(F) with log 0 = -inf; word is (σ_m, ..., σ_0), next_symbol is σ_1"""
    word = _check_word(sys, word)
    if next_symbol not in sys.alphabet:
        raise CodingException("symbol '{}' is not an edge of the system".format(next_symbol))
    result = coding_point(sys, word)
    if not result.admissible or sys.source(next_symbol) != sys.target(word[-1]):
        return EnergyValue(-math.inf, result, next_symbol)
    return EnergyValue(safe_log(sys.p(next_symbol, result.point)), result, next_symbol)


def _word_depth(word, m):
    if m is None:
        return 1 - len(word)
    if len(word) != 1 - m:
        raise CodingException("word of length {} does not end at index 0 from depth {}".format(len(word), m))
    return m


def cond_exp_Fm(sys, nu, m, e, word):
    """
    E_{φ_m(ν)}(1_{_1[e]} | F_m) on the cylinder _m[word], evaluated as p_e at the coding point
    :param nu: not read by the formula; cond_exp_ratio evaluates the same conditional through φ_m(ν)
    """
    word = _check_word(sys, word)
    m = _word_depth(word, m)
    if not is_admissible(sys, word):
        raise CodingException("word {} is not admissible".format(",".join(word)))
    if e not in sys.alphabet:
        raise CodingException("symbol '{}' is not an edge of the system".format(e))
    return sys.p(e, coding_point(sys, word).point)


def cond_exp_ratio(sys, nu, m, e, word):
    """φ_m(ν)(_m[word·e]) / φ_m(ν)(_m[word]), the defining ratio of the conditional expectation"""
    word = _check_word(sys, word)
    m = _word_depth(word, m)
    measure = MarkovPathMeasure(sys, nu)
    denominator = measure.phi_mass(m, Cylinder(m, word, sys.alphabet))
    if not denominator:
        raise CodingException("conditioning cylinder {} has zero mass".format(",".join(word)))
    return measure.phi_mass(m, Cylinder(m, word + (e,), sys.alphabet)) / denominator


def sample_admissible_past(sys, length, rng, start_state=None):
    """Admissible word of the given length read off a forward path of the chain"""
    if length < 1:
        raise CodingException("length must be positive")
    states = [s for s in sys.states if s in sys.base_points]
    if start_state is None:
        start_state = states[int(rng.integers(len(states)))]
    path = simulate(sys, sys.base_points[start_state], length, rng)
    return tuple(e for e, _ in path)


def cauchy_profile(sys, word):
    """
    Successive displacements d(F_{-k}, F_{-k-1}) as the past word is read back further.
    The sequence of coding points is Cauchy exactly when these are eventually summable
    """
    word = _check_word(sys, word)
    if not is_admissible(sys, word):
        raise CodingException("word {} is not admissible".format(",".join(word)))
    points = coding_points(sys, word)
    displacements = [sys.space.distance(a, b) for a, b in zip(points, points[1:])]
    rate = certified_rate(sys)
    bounds = [rate ** k * diameter(sys) for k in range(1, len(points))] if rate is not None else None
    return {
        "points": points,
        "displacements": displacements,
        "bounds": bounds,
        "tail": math.fsum(displacements[-3:]) if displacements else 0.0,
    }


def _suffix_values(sys, e, word, max_depth):
    return [float(sys.p(e, _compose(sys, word[len(word) - d - 1:]))) for d in range(max_depth + 1)]


def martingale_diagnostic(sys, nu, e, words, max_depth):
    """
    p_e(F_m) for m = 0..-max_depth along each past word, with increments and the contraction
    bound Λ_p·a^{|m|+1}·diam(K) when a contraction rate a is certified
    :param words: admissible pasts of length >= max_depth + 1
    :return: dict with one row per word, violations of the bound and, on finite chains, the
        one-step past averaging residual
    """
    if e not in sys.alphabet:
        raise CodingException("symbol '{}' is not an edge of the system".format(e))
    rate = certified_rate(sys)
    slope = probability_lipschitz(sys, e)
    rows = []
    violations = 0
    for word in words:
        word = _check_word(sys, word)
        if len(word) < max_depth + 1:
            raise CodingException("word of length {} is shorter than depth {}".format(len(word), max_depth))
        if not is_admissible(sys, word):
            raise CodingException("word {} is not admissible".format(",".join(word)))
        values = _suffix_values(sys, e, word, max_depth)
        increments = [b - a for a, b in zip(values, values[1:])]
        row = {"word": list(word), "values": values, "increments": increments}
        if rate is not None:
            bounds = [slope * rate ** (d + 1) * diameter(sys) for d in range(max_depth + 1)]
            row["bounds"] = bounds
            for d in range(max_depth + 1):
                spread = max(abs(values[d] - v) for v in values[d:])
                if spread > bounds[d] + BOUND_SLACK:
                    violations += 1
        rows.append(row)
    out = {"symbol": e, "rate": rate, "probability_lipschitz": slope, "rows": rows, "violations": violations}
    if sys.is_finite_chain() and nu is not None:
        depth = min(max_depth, 2)
        out["averaging_residual"] = averaging_residual(sys, nu, -depth, e, [w[len(w) - depth - 1:] for w in words])
    if violations:
        logger.warning("{} martingale bound violations for symbol {}".format(violations, e))
    return out


def averaging_residual(sys, nu, m, e, words):
    """
    ∫ p_e dφ̃_{m-1}(ν) over K×_m[word], summing out the extra past symbol, against the same
    integral for U*ν at depth m; max absolute difference over the words (σ_m, ..., σ_0)
    """
    moved = apply_U_star(sys, nu)

    def p_e(y):
        return sys.p(e, y)

    worst = 0
    for word in words:
        word = _check_word(sys, word)
        cylinder = Cylinder(_word_depth(word, m), word, sys.alphabet)
        lhs = tilde_phi_integral(sys, nu, m - 1, None, cylinder, p_e, RECURSION)
        rhs = tilde_phi_integral(sys, moved, m, None, cylinder, p_e)
        worst = max(worst, abs(lhs - rhs))
    return worst


def _exact_chain_entropy(sys, nu):
    if not sys.is_finite_chain():
        raise CodingException("exact-chain mode needs a finite chain with one point per state")
    measure = MarkovPathMeasure(sys, nu)
    if not measure.is_consistent():
        raise CodingException("initial distribution is not stationary; use stationary_distribution first")
    summands = []
    for e0 in sys.alphabet:
        for e1 in sys.edges_from(sys.target(e0)):
            weight = measure.phi_mass(0, Cylinder(0, (e0, e1), sys.alphabet))
            if not weight:
                continue
            log_p = safe_log(sys.p(e1, sys.base_points[sys.target(e0)]))
            term = float(weight) * log_p
            summands.append({"edges": [e0, e1], "weight": weight, "h": -term, "u": term})
    entropy = math.fsum(s["h"] for s in summands) + 0.0
    integral = math.fsum(s["u"] for s in summands) + 0.0
    return {
        "mode": EXACT_CHAIN,
        "entropy": entropy,
        "integral_u": integral,
        "residual": entropy + integral,
        "phi_mass_used": measure.total(),
        "summands": summands,
    }


def _entropy_chunk(args):
    # runs in a worker process: one seeded stream, one forward path
    sys, starts, weights, seed, burn_in, steps = args
    rng = np.random.default_rng(seed)
    x = starts[int(rng.choice(len(starts), p=weights))]
    for _, x in simulate(sys, x, burn_in, rng):
        pass
    h_terms, u_terms = [], []
    for _ in range(steps):
        options = sys.transitions(x)
        h_terms.append(-math.fsum(float(p) * math.log(p) for _, p, _ in options if p > 0))
        e, x_next = simulate(sys, x, 1, rng)[0]
        u_terms.append(safe_log(float(sys.p(e, x))))
        x = x_next
    return h_terms, u_terms


def _estimate_entropy(sys, samples, burn_in, seed, workers):
    stationary = stationary_distribution(sys)
    starts = [x for x, _ in stationary.measure.atoms]
    weights = np.array([float(w) for _, w in stationary.measure.atoms])
    weights = weights / weights.sum()
    streams = np.random.SeedSequence(seed).spawn(workers)
    sizes = [samples // workers + (1 if i < samples % workers else 0) for i in range(workers)]
    tasks = [(sys, starts, weights, streams[i], burn_in, sizes[i]) for i in range(workers)]
    if workers == 1:
        chunks = [_entropy_chunk(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            # map keeps the input order, so results do not depend on scheduling
            chunks = list(executor.map(_entropy_chunk, tasks))
    h_terms = np.array([h for chunk in chunks for h in chunk[0]])
    u_terms = np.array([u for chunk in chunks for u in chunk[1]])
    if np.any(np.isneginf(u_terms)):
        integral, residual, error = -math.inf, -math.inf, math.inf
    else:
        integral = float(u_terms.mean())
        terms = h_terms + u_terms
        residual = float(terms.mean())
        error = float(terms.std(ddof=1) / math.sqrt(len(terms))) if len(terms) > 1 else math.inf
    return {
        "mode": ESTIMATE,
        "entropy": float(h_terms.mean()),
        "integral_u": integral,
        "residual": residual,
        "standard_error": error,
        "within_three_errors": abs(residual) <= 3 * error,
        "phi_mass_used": 1.0,
        "samples": int(sum(sizes)),
        "burn_in": burn_in,
        "seed": seed,
        "workers": workers,
        "stationary_exact": stationary.exact,
    }


def entropy_equilibrium(sys, nu=None, mode=EXACT_CHAIN, samples=100000, burn_in=1000, seed=0, workers=1):
    """
    Entropy h of Φ(ν), the integral of u against it and the equilibrium residual h + ∫u
    :param mode: "exact-chain" sums the edge chain exactly and needs a stationary ν on a finite chain;
        "estimate" averages along a simulated stationary path, split over workers with one seeded
        stream each
    :return: dict
    """
    if mode not in ENTROPY_MODES:
        raise CodingException("mode must be one of {}".format(", ".join(ENTROPY_MODES)))
    if mode == EXACT_CHAIN:
        if nu is None:
            raise CodingException("exact-chain mode needs the stationary initial distribution")
        return _exact_chain_entropy(sys, nu)
    if samples < 2 or burn_in < 0 or workers < 1:
        raise CodingException("samples >= 2, burn_in >= 0 and workers >= 1 are required")
    return _estimate_entropy(sys, samples, burn_in, seed, workers)


def pushforward_checks(sys, nu, params=None, max_length=3):
    """
    F(Φ(ν)) on the states of a finite chain, the residual of Φ = φ_0(F(Φ)) on cylinders starting at 0,
    and the U* invariance residual of F(Φ)
    """
    if not sys.is_finite_chain():
        raise CodingException("pushforward checks need a finite chain with one point per state")
    params = params or CoverParams(past_depth=2, arithmetic=sys.arithmetic)
    measure = MarkovPathMeasure(sys, nu)
    certified = measure.is_consistent()
    atoms = []
    for state in sys.space.states():
        entering = [Cylinder(0, (e,), sys.alphabet) for e in sys.alphabet if sys.target(e) == state]
        mass = phi_estimate(measure, None, CylinderSet(sys.alphabet, entering), params, False).value
        atoms.append((sys.base_points[state], mass))
    pushed = PointMeasure(atoms, sort_key=sys.space.sort_key)
    image = MarkovPathMeasure(sys, pushed)
    sibpm = 0
    for c in cylinders_up_to(sys.alphabet, max_length):
        outer = phi_estimate(measure, None, CylinderSet(sys.alphabet, [c]), params, False).value
        sibpm = max(sibpm, abs(outer - image.phi_mass(0, c)))
    eoim = apply_U_star(sys, pushed).l1_distance(pushed)
    if not certified:
        logger.warning("pushforward of a non stationary family is indicative only")
    return {"pushforward": pushed.to_dict(), "sibpm_residual": sibpm, "eoim_residual": eoim,
            "certified": certified}

