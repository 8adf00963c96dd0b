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
Markov systems (K_i, w_e, p_e) over finite point sets and compact intervals, the adjoint Markov
operator U* on finitely supported measures, contraction diagnostics and stationary distributions.
"""

import bisect
import itertools
import logging
import math
from fractions import Fraction

import networkx as nx
import numpy as np
import sympy
from numpy.polynomial import Polynomial
from scipy.linalg import null_space

from ddm.common_utils import is_exact
from ddm.shift import Alphabet

REST = "rest"
DEFAULT_ATOM_BUDGET = 1 << 16
DEFAULT_GRID = 1024
NORMALIZATION_TOLERANCE = 1e-12
STATIONARY_TOLERANCE = 1e-10
CONTRACTION_TOLERANCE = 1e-12

logger = logging.getLogger("ddm.system")


class SystemException(Exception):

    def __init__(self, message, exit_code=2):
        self.exit_code = exit_code
        Exception.__init__(self, "system exception " + str(message))


def _finding(invariant, detail):
    return {"invariant": invariant, "detail": detail}


def exact_sum(values):
    """Exact sum for rationals, correctly rounded sum for floats"""
    values = list(values)
    if all(is_exact(v) for v in values):
        return sum(values, Fraction(0))
    return math.fsum(values)


class StateSpace(object):
    kind = None

    def cell(self, x):
        raise SystemException("Method 'cell' not implemented")

    def states(self):
        raise SystemException("Method 'states' not implemented")

    def distance(self, x, y):
        raise SystemException("Method 'distance' not implemented")

    def diameter(self):
        raise SystemException("Method 'diameter' not implemented")

    def validate(self):
        return []

    def sort_key(self, x):
        return x


class PointSpace(StateSpace):
    """Finitely many labelled points with a metric table; missing metric means the discrete metric"""

    kind = "points"

    def __init__(self, points, partition, metric=None):
        self.points = [str(p) for p in points]
        if len(set(self.points)) != len(self.points):
            raise SystemException("point labels must be unique")
        self._index = {p: i for i, p in enumerate(self.points)}
        self.partition = {}
        for p in self.points:
            if p not in partition:
                raise SystemException("point '{}' is not assigned to a state".format(p))
            self.partition[p] = int(partition[p])
        for p in partition:
            if str(p) not in self._index:
                raise SystemException("partition names unknown point '{}'".format(p))
        if metric is None:
            self.metric = None
        else:
            self.metric = np.array(metric, dtype=float)
            if self.metric.shape != (len(self.points), len(self.points)):
                raise SystemException("metric table must be {0}x{0}".format(len(self.points)))

    def cell(self, x):
        try:
            return self.partition[str(x)]
        except KeyError:
            raise SystemException("point '{}' lies outside the state space".format(x))

    def states(self):
        return sorted(set(self.partition.values()))

    def cell_points(self, state):
        return [p for p in self.points if self.partition[p] == state]

    def distance(self, x, y):
        if self.metric is None:
            return 0.0 if x == y else 1.0
        return float(self.metric[self._index[x], self._index[y]])

    def diameter(self):
        if len(self.points) < 2:
            return 0.0
        return max(self.distance(x, y) for x, y in itertools.combinations(self.points, 2))

    def sort_key(self, x):
        return self._index.get(x, len(self.points))

    def same_cell_pairs(self):
        pairs = []
        for state in self.states():
            pairs.extend(itertools.combinations(self.cell_points(state), 2))
        return pairs

    def validate(self):
        findings = []
        if self.metric is None:
            return findings
        d = self.metric
        n = len(self.points)
        if not np.allclose(d, d.T, rtol=0, atol=1e-12):
            findings.append(_finding("metric-symmetry", "metric table is not symmetric"))
        if np.any(np.abs(np.diag(d)) > 0):
            findings.append(_finding("metric-diagonal", "metric table has a non zero diagonal"))
        for i, j in itertools.permutations(range(n), 2):
            if d[i, j] <= 0:
                findings.append(_finding("metric-positivity", "d({}, {}) <= 0".format(
                    self.points[i], self.points[j])))
        for i, j, k in itertools.product(range(n), repeat=3):
            if d[i, k] > d[i, j] + d[j, k] + 1e-12:
                findings.append(_finding("metric-triangle", "d({0},{2}) > d({0},{1}) + d({1},{2})".format(
                    self.points[i], self.points[j], self.points[k])))
        return findings


class IntervalSpace(StateSpace):
    """
    Compact interval [lo, hi] split into subintervals, each assigned to a state.
    Subintervals are half open [a, b) except the last one, which is closed at hi
    """

    kind = "interval"

    def __init__(self, lo, hi, partition):
        self.lo = float(lo)
        self.hi = float(hi)
        if not self.lo < self.hi:
            raise SystemException("interval bounds must satisfy lo < hi")
        segments = sorted((float(a), float(b), int(s)) for a, b, s in partition)
        if not segments:
            raise SystemException("interval partition is empty")
        self.segments = segments
        self._starts = [a for a, _, _ in segments]

    def partition_findings(self):
        findings = []
        expected = self.lo
        for a, b, s in self.segments:
            if a != expected:
                findings.append(_finding("partition", "gap or overlap at {}".format(a)))
            if not a < b:
                findings.append(_finding("partition", "empty subinterval [{}, {})".format(a, b)))
            expected = b
        if expected != self.hi:
            findings.append(_finding("partition", "partition stops at {} instead of {}".format(expected, self.hi)))
        return findings

    def validate(self):
        return self.partition_findings()

    def cell(self, x):
        x = float(x)
        if not self.lo <= x <= self.hi:
            raise SystemException("point {!r} lies outside [{}, {}]".format(x, self.lo, self.hi))
        k = bisect.bisect_right(self._starts, x) - 1
        a, b, s = self.segments[k]
        if x < b or (x == b == self.hi):
            return s
        raise SystemException("point {!r} is not covered by the partition".format(x))

    def cells_vector(self, xs):
        k = np.searchsorted(np.array(self._starts), xs, side="right") - 1
        k = np.clip(k, 0, len(self.segments) - 1)
        return np.array([s for _, _, s in self.segments])[k]

    def states(self):
        return sorted(set(s for _, _, s in self.segments))

    def cell_segments(self, state):
        return [(a, b) for a, b, s in self.segments if s == state]

    def distance(self, x, y):
        return abs(float(x) - float(y))

    def diameter(self):
        return self.hi - self.lo

    def grid(self, density=DEFAULT_GRID):
        points = set(np.linspace(self.lo, self.hi, max(density, 2)).tolist())
        points.update(a for a, _, _ in self.segments)
        points.add(self.hi)
        return sorted(points)


class Edge(object):
    """
    One symbol of the alphabet with its source and target states, its map and its probability.
    map: points -> {point: point}; interval -> (slope, intercept)
    prob: points -> {point: number}; interval -> polynomial coefficients, lowest degree first;
    either may be REST meaning one minus the other edges leaving the same state
    """

    def __init__(self, symbol, source, target, map, prob):
        self.symbol = str(symbol)
        self.source = int(source)
        self.target = int(target)
        self.map = map
        self.prob = prob


class MarkovSystem(object):

    def __init__(self, space, edges, base_points, contraction_constant=None, name=None, arithmetic="float"):
        self.space = space
        self.edges = {}
        for edge in edges:
            if edge.symbol in self.edges:
                raise SystemException("duplicate edge symbol '{}'".format(edge.symbol))
            self.edges[edge.symbol] = edge
        if not self.edges:
            raise SystemException("a Markov system needs at least one edge")
        self.alphabet = Alphabet(tuple(e.symbol for e in edges))
        self.base_points = {int(k): v for k, v in base_points.items()}
        self.contraction_constant = contraction_constant
        self.name = name
        self.arithmetic = arithmetic
        if arithmetic == "rational" and space.kind != "points":
            raise SystemException("rational arithmetic needs a finite point space")
        self._outgoing = {}
        for edge in edges:
            self._outgoing.setdefault(edge.source, []).append(edge.symbol)
        self._poly = {}
        if space.kind == "interval":
            for edge in edges:
                if edge.prob != REST:
                    self._poly[edge.symbol] = Polynomial([float(c) for c in edge.prob])
        for state, symbols in self._outgoing.items():
            if sum(1 for s in symbols if self.edges[s].prob == REST) > 1:
                raise SystemException("state {} has more than one 'rest' probability".format(state))

    def __repr__(self):
        return "MarkovSystem({})".format(self.name or self.space.kind)

    @property
    def states(self):
        return sorted(set(self.space.states()) | set(self._outgoing) | set(self.base_points))

    def zero(self):
        return Fraction(0) if self.arithmetic == "rational" else 0.0

    def one(self):
        return Fraction(1) if self.arithmetic == "rational" else 1.0

    def source(self, e):
        return self.edges[e].source

    def target(self, e):
        return self.edges[e].target

    def edges_from(self, state):
        return list(self._outgoing.get(state, []))

    def cell(self, x):
        return self.space.cell(x)

    def is_finite_chain(self):
        """Finite point space with one point per state, so every map is constant"""
        if self.space.kind != "points":
            return False
        return all(len(self.space.cell_points(s)) == 1 for s in self.space.states())

    def w(self, e, x):
        edge = self.edges[e]
        if self.cell(x) != edge.source:
            raise SystemException("w_{} evaluated outside its cell at {!r}".format(e, x))
        if self.space.kind == "points":
            try:
                return str(edge.map[x])
            except KeyError:
                raise SystemException("w_{} has no value at point '{}'".format(e, x))
        slope, intercept = edge.map
        return slope * float(x) + intercept

    def _p_raw(self, edge, x):
        if edge.prob == REST:
            others = [self._p_raw(self.edges[s], x) for s in self._outgoing[edge.source] if s != edge.symbol]
            return self.one() - exact_sum(others)
        if self.space.kind == "points":
            try:
                return edge.prob[x]
            except KeyError:
                raise SystemException("p_{} has no value at point '{}'".format(edge.symbol, x))
        return float(self._poly[edge.symbol](float(x)))

    def p(self, e, x):
        """p_e(x), extended by zero to the other cells of K"""
        edge = self.edges[e]
        if self.cell(x) != edge.source:
            return self.zero()
        return self._p_raw(edge, x)

    def transitions(self, x):
        """[(e, p_e(x), w_e(x))] over the edges leaving the cell of x"""
        out = []
        for e in self._outgoing.get(self.cell(x), []):
            out.append((e, self._p_raw(self.edges[e], x), self.w(e, x)))
        return out

    def p_vector(self, e, xs):
        """Vectorised p_e on an array of interval points"""
        edge = self.edges[e]
        if edge.prob == REST:
            values = np.ones_like(xs)
            for s in self._outgoing[edge.source]:
                if s != e:
                    values = values - self._poly[s](xs)
        else:
            values = self._poly[e](xs)
        return np.where(self.space.cells_vector(xs) == edge.source, values, 0.0)

    def w_vector(self, e, xs):
        slope, intercept = self.edges[e].map
        return slope * xs + intercept

    def snap(self, y, resolution):
        """
        Splits an interval point between its two neighbouring grid points, keeping the first moment.
        Returns [(point, share)]; points whose neighbours fall in another cell are kept as they are
        """
        space = self.space
        t = (y - space.lo) / resolution
        i = math.floor(t)
        frac = t - i
        g0 = space.lo + i * resolution
        if frac == 0:
            return [(g0, 1.0)]
        g1 = min(space.lo + (i + 1) * resolution, space.hi)
        try:
            if space.cell(g0) != space.cell(y) or space.cell(g1) != space.cell(y):
                return [(y, 1.0)]
        except SystemException:
            return [(y, 1.0)]
        return [(g0, 1.0 - frac), (g1, frac)]


class PointMeasure(object):
    """Finitely supported measure on K; atoms at identical points are merged"""

    def __init__(self, atoms=(), sort_key=None):
        merged = {}
        for x, weight in atoms:
            if weight < 0:
                raise SystemException("negative weight {} at {!r}".format(weight, x))
            merged[x] = merged[x] + weight if x in merged else weight
        keys = sorted(merged, key=sort_key) if sort_key else sorted(merged)
        self.atoms = tuple((x, merged[x]) for x in keys)

    @classmethod
    def dirac(cls, x, one=1.0):
        return cls([(x, one)])

    @property
    def total(self):
        return exact_sum(w for _, w in self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __repr__(self):
        return "PointMeasure({})".format(list(self.atoms))

    def weight(self, x):
        for y, w in self.atoms:
            if y == x:
                return w
        return 0

    def support(self):
        return [x for x, w in self.atoms if w > 0]

    def scaled(self, alpha):
        return PointMeasure([(x, alpha * w) for x, w in self.atoms])

    def plus(self, other):
        return PointMeasure(list(self.atoms) + list(other.atoms))

    def l1_distance(self, other):
        points = set(x for x, _ in self.atoms) | set(x for x, _ in other.atoms)
        return exact_sum(abs(self.weight(x) - other.weight(x)) for x in points)

    def to_dict(self):
        return {"atoms": [{"point": x, "weight": w} for x, w in self.atoms]}


def initial_uniform(sys, states=None):
    """ν_0 (all states) or ν'_0 (the given states): uniform over the base points"""
    states = sys.states if states is None else sorted(set(int(s) for s in states))
    if not states:
        raise SystemException("uniform initial distribution over an empty set of states")
    missing = [s for s in states if s not in sys.base_points]
    if missing:
        raise SystemException("no base point for states {}".format(missing))
    share = Fraction(1, len(states)) if sys.arithmetic == "rational" else 1.0 / len(states)
    return PointMeasure([(sys.base_points[s], share) for s in states], sort_key=sys.space.sort_key)


def validate_system(sys, grid=DEFAULT_GRID):
    """
    Checks the Markov system invariants
    :param sys: MarkovSystem
    :param grid: grid density for interval spaces
    :return: list of findings {"invariant", "detail"}, empty when valid
    """
    findings = list(sys.space.validate())
    states = sys.space.states()
    for e, edge in sys.edges.items():
        if edge.target not in states:
            findings.append(_finding("target-range", "t({}) = {} is not a state".format(e, edge.target)))
        if edge.source not in states:
            findings.append(_finding("source-range", "i({}) = {} is not a state".format(e, edge.source)))
    for s in states:
        if not sys.edges_from(s):
            findings.append(_finding("source-surjective", "no edge leaves state {}".format(s)))
        if s not in sys.base_points:
            findings.append(_finding("base-point", "state {} has no base point".format(s)))
    for s, x in sys.base_points.items():
        try:
            if sys.cell(x) != s:
                findings.append(_finding("base-point", "base point {!r} is not in K_{}".format(x, s)))
        except SystemException as e:
            findings.append(_finding("base-point", str(e)))
    if sys.space.kind == "points":
        samples = list(sys.space.points)
    else:
        samples = sys.space.grid(grid)
    for x in samples:
        try:
            state = sys.cell(x)
        except SystemException:
            continue
        symbols = sys.edges_from(state)
        values = []
        for e in symbols:
            try:
                value = sys.p(e, x)
            except SystemException as exc:
                findings.append(_finding("probability-defined", str(exc)))
                continue
            values.append(value)
            if not value > 0:
                findings.append(_finding("positivity", "p_{}({!r}) = {} is not positive".format(e, x, value)))
            try:
                y = sys.w(e, x)
                if sys.target(e) in states and sys.cell(y) != sys.target(e):
                    findings.append(_finding("target-consistency", "w_{}({!r}) = {!r} is not in K_{}".format(
                        e, x, y, sys.target(e))))
            except SystemException as exc:
                findings.append(_finding("target-consistency", str(exc)))
        if symbols and len(values) == len(symbols):
            total = exact_sum(values)
            exact = all(is_exact(v) for v in values)
            if (exact and total != 1) or (not exact and abs(total - 1) > NORMALIZATION_TOLERANCE):
                findings.append(_finding("probability-normalization", "probabilities at {!r} sum to {}".format(
                    x, total)))
    if not findings:
        findings.extend(_contraction_findings(sys, grid))
    return findings


def _contraction_findings(sys, samples):
    a = sys.contraction_constant
    if a is None:
        return []
    if not 0 < a < 1:
        return [_finding("contraction-constant", "contraction constant {} is not in (0, 1)".format(a))]
    estimate = contraction_ratio(sys, samples=samples)
    if estimate.ratio > a + CONTRACTION_TOLERANCE:
        return [_finding("contraction-constant", "pairs contract at ratio {} above the declared {}".format(
            estimate.ratio, a))]
    return []


class ContractionEstimate(object):

    def __init__(self, ratio, pairs, exact):
        self.ratio = ratio
        self.pairs = pairs
        self.exact = exact

    @property
    def contractive(self):
        return self.ratio < 1

    def to_dict(self):
        return {"ratio": self.ratio, "pairs": self.pairs, "exact": self.exact, "contractive": self.contractive}


def _pair_ratio(sys, x, y):
    d = sys.space.distance(x, y)
    if d == 0:
        return None
    if sys.space.kind == "interval":
        # affine maps: d(w_e x, w_e y) = |slope| d(x, y)
        return math.fsum(float(p) * abs(sys.edges[e].map[0]) for e, p, _ in sys.transitions(x))
    return math.fsum(float(p) * sys.space.distance(wx, sys.w(e, y)) / d for e, p, wx in sys.transitions(x))


def contraction_ratio(sys, samples=1000, seed=0):
    """
    Estimates max Σ_e p_e(x) d(w_e x, w_e y) / d(x, y) over pairs x != y of the same cell
    :return: ContractionEstimate; exact for point spaces when samples covers every pair
    """
    if samples < 1:
        raise SystemException("samples must be positive")
    rng = np.random.default_rng(seed)
    best = 0.0
    if sys.space.kind == "points":
        pairs = sys.space.same_cell_pairs()
        exact = samples >= len(pairs)
        if not exact:
            chosen = rng.choice(len(pairs), size=samples, replace=False)
            pairs = [pairs[i] for i in sorted(chosen)]
        for x, y in pairs:
            r = _pair_ratio(sys, x, y)
            if r is not None:
                best = max(best, r)
        return ContractionEstimate(best, len(pairs), exact)
    segments = [(a, b) for a, b, _ in sys.space.segments]
    lengths = np.array([b - a for a, b in segments])
    count = 0
    for _ in range(samples):
        k = rng.choice(len(segments), p=lengths / lengths.sum())
        a, b = segments[k]
        x, y = rng.uniform(a, b, size=2).tolist()
        if sys.cell(x) != sys.cell(y):
            continue
        r = _pair_ratio(sys, x, y)
        if r is not None:
            count += 1
            best = max(best, r)
    return ContractionEstimate(best, count, False)


def lipschitz_constant(sys):
    """Largest Lipschitz constant of the maps w_e on their cells"""
    best = 0.0
    for e, edge in sys.edges.items():
        if sys.space.kind == "interval":
            best = max(best, abs(float(edge.map[0])))
            continue
        cell = sys.space.cell_points(edge.source)
        for x, y in itertools.combinations(cell, 2):
            d = sys.space.distance(x, y)
            if d > 0:
                best = max(best, sys.space.distance(sys.w(e, x), sys.w(e, y)) / d)
    return best


def probability_lipschitz(sys, e, grid=DEFAULT_GRID):
    """Lipschitz constant of p_e on its cell (exact for linear probabilities on intervals)"""
    edge = sys.edges[e]
    if sys.space.kind == "points":
        best = 0.0
        for x, y in itertools.combinations(sys.space.cell_points(edge.source), 2):
            d = sys.space.distance(x, y)
            if d > 0:
                best = max(best, abs(float(sys.p(e, x)) - float(sys.p(e, y))) / d)
        return best
    if edge.prob == REST:
        poly = Polynomial([1.0])
        for s in sys.edges_from(edge.source):
            if s != e:
                poly = poly - sys._poly[s]
    else:
        poly = sys._poly[e]
    derivative = poly.deriv()
    xs = [x for a, b in sys.space.cell_segments(edge.source) for x in np.linspace(a, b, grid).tolist()]
    return float(max(abs(derivative(x)) for x in xs))


def diameter(sys):
    return sys.space.diameter()


def certified_rate(sys):
    """
    Rate a with d(F_m, F_{m-k}) <= a^{|m|}·diam(K): the declared contraction constant, or the largest
    map slope when every map contracts, whichever is smaller
    :return: float, or None when neither is below one
    """
    rates = []
    if sys.contraction_constant is not None and 0 < sys.contraction_constant < 1:
        rates.append(float(sys.contraction_constant))
    slope = lipschitz_constant(sys)
    if slope < 1:
        rates.append(slope)
    return min(rates) if rates else None


def apply_U_star(sys, nu, weight_floor=None, resolution=None, atom_budget=DEFAULT_ATOM_BUDGET):
    """
    One step of the chain on measures: U*δ_x = Σ_{e: i(e)=i(x)} p_e(x) δ_{w_e x}
    :param sys: MarkovSystem
    :param nu: PointMeasure
    :param weight_floor: drop atoms lighter than this and renormalise to the original mass (off by default)
    :param resolution: interval spaces only, split every image point between its two grid neighbours
    :param atom_budget: refuse to produce more atoms than this
    :return: PointMeasure
    """
    acc = {}
    for x, weight in nu.atoms:
        for e, p, y in sys.transitions(x):
            if not p:
                continue
            mass = weight * p
            if resolution is not None and sys.space.kind == "interval":
                for g, share in sys.snap(y, resolution):
                    acc[g] = acc[g] + mass * share if g in acc else mass * share
            else:
                acc[y] = acc[y] + mass if y in acc else mass
        if len(acc) > atom_budget:
            raise SystemException("U* support exceeds the atom budget of {}".format(atom_budget))
    atoms = list(acc.items())
    if weight_floor is not None:
        kept = [(x, w) for x, w in atoms if w >= weight_floor]
        kept_total = exact_sum(w for _, w in kept)
        if kept_total == 0:
            raise SystemException("weight floor {} removes every atom".format(weight_floor))
        scale = nu.total / kept_total
        atoms = [(x, w * scale) for x, w in kept]
    return PointMeasure(atoms, sort_key=sys.space.sort_key)


def iterate_U_star(sys, nu, k, **kwargs):
    for _ in range(k):
        nu = apply_U_star(sys, nu, **kwargs)
    return nu


class StationaryResult(object):

    def __init__(self, measure, unique, classes=None, exact=True, profile=None, residual=None):
        self.measure = measure
        self.unique = unique
        self.classes = classes or []
        self.exact = exact
        self.profile = profile
        self.residual = residual

    def to_dict(self):
        return {
            "measure": self.measure.to_dict(),
            "unique": self.unique,
            "closed_classes": self.classes,
            "exact": self.exact,
            "profile": self.profile,
            "residual": self.residual,
        }


def transition_table(sys):
    """Row stochastic table over the points of a finite point space, as {x: {y: p}}"""
    table = {}
    for x in sys.space.points:
        row = {}
        for _, p, y in sys.transitions(x):
            if p:
                row[y] = row[y] + p if y in row else p
        table[x] = row
    return table


def _solve_class_rational(points, table):
    n = len(points)
    index = {x: i for i, x in enumerate(points)}
    a = sympy.zeros(n, n)
    for x in points:
        for y, p in table[x].items():
            a[index[y], index[x]] += sympy.Rational(p.numerator, p.denominator)
    a -= sympy.eye(n)
    basis = a.nullspace()
    if len(basis) != 1:
        raise SystemException("fixed point space of a closed class has dimension {}".format(len(basis)))
    v = basis[0] / sum(basis[0])
    return [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in v]


def _solve_class_float(points, table):
    n = len(points)
    index = {x: i for i, x in enumerate(points)}
    a = np.zeros((n, n))
    for x in points:
        for y, p in table[x].items():
            a[index[y], index[x]] += float(p)
    a -= np.eye(n)
    basis = null_space(a, rcond=1e-10)
    if basis.shape[1] != 1:
        raise SystemException("ill-conditioned stationary solve: null space dimension {}, singular values {}".format(
            basis.shape[1], np.linalg.svd(a, compute_uv=False).tolist()))
    v = basis[:, 0]
    v = v / v.sum()
    if np.any(v < -1e-12):
        raise SystemException("stationary solve produced negative weights {}".format(v.tolist()))
    v = np.clip(v, 0.0, None)
    return (v / v.sum()).tolist()


def stationary_distribution(sys, iterations=30, resolution=2.0 ** -12, test_length=3):
    """
    Stationary distribution of the induced chain
    :param sys: MarkovSystem
    :param iterations: interval spaces, number of U* steps from ν_0
    :param resolution: interval spaces, grid on which the iterates are kept
    :param test_length: interval spaces, cylinders _0[w] with |w| <= test_length form the test family
    :return: StationaryResult
    """
    if sys.space.kind == "interval":
        return _stationary_profile(sys, iterations, resolution, test_length)
    table = transition_table(sys)
    graph = nx.DiGraph()
    graph.add_nodes_from(sys.space.points)
    for x, row in table.items():
        graph.add_edges_from((x, y) for y in row)
    order = sys.space.sort_key
    classes = sorted((sorted(c, key=order) for c in nx.attracting_components(graph)), key=lambda c: order(c[0]))
    if not classes:
        raise SystemException("induced chain has no closed class")
    if len(classes) > 1:
        logger.warning("{} closed classes, stationary distribution is not unique".format(len(classes)))
    chosen = classes[0]
    if sys.arithmetic == "rational":
        weights = _solve_class_rational(chosen, table)
    else:
        weights = _solve_class_float(chosen, table)
    measure = PointMeasure(zip(chosen, weights), sort_key=order)
    residual = apply_U_star(sys, measure).l1_distance(measure)
    if residual > STATIONARY_TOLERANCE:
        raise SystemException("stationary residual {} above {}".format(residual, STATIONARY_TOLERANCE))
    return StationaryResult(measure, len(classes) == 1, classes=classes, exact=True, residual=residual)


def _word_masses(sys, nu, words):
    xs = np.array([float(x) for x, _ in nu.atoms])
    ws = np.array([float(w) for _, w in nu.atoms])
    masses = []
    for word in words:
        points = xs
        mass = ws
        for e in word:
            mass = mass * sys.p_vector(e, points)
            points = sys.w_vector(e, points)
        masses.append(float(mass.sum()))
    return np.array(masses)


def _stationary_profile(sys, iterations, resolution, test_length):
    words = [w for n in range(1, test_length + 1) for w in itertools.product(sys.alphabet.symbols, repeat=n)]
    nu = initial_uniform(sys)
    masses = _word_masses(sys, nu, words)
    profile = []
    for _ in range(iterations):
        nu = apply_U_star(sys, nu, resolution=resolution)
        next_masses = _word_masses(sys, nu, words)
        profile.append(float(np.max(np.abs(next_masses - masses))))
        masses = next_masses
    logger.debug("interval stationary iteration ended with discrepancy {}".format(profile[-1] if profile else None))
    return StationaryResult(nu, None, exact=False, profile=profile, residual=profile[-1] if profile else None)


def random_chain(states, rng, arithmetic="rational", max_edges=None, denominator=12):
    """
    Random finite chain with one point per state, labelled "1".."N", and edges named e<i>.<j>
    :param states: number of states N
    :param rng: numpy Generator
    :param arithmetic: "rational" or "float"
    :param max_edges: cap on |E|, at least N
    :param denominator: probabilities are multiples of 1/denominator
    """
    max_edges = states * states if max_edges is None else max_edges
    if max_edges < states:
        raise SystemException("max_edges must be at least the number of states")
    labels = [str(i) for i in range(1, states + 1)]
    targets = {i: [int(rng.integers(1, states + 1))] for i in range(1, states + 1)}
    budget = max_edges - states
    for i in range(1, states + 1):
        for j in rng.permutation(np.arange(1, states + 1)).tolist():
            if budget and j not in targets[i] and rng.random() < 0.5:
                targets[i].append(j)
                budget -= 1
    edges = []
    for i in range(1, states + 1):
        row = sorted(targets[i])
        cuts = sorted(rng.choice(np.arange(1, denominator), size=len(row) - 1, replace=False).tolist())
        parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
        for j, k in zip(row, parts):
            p = Fraction(k, denominator) if arithmetic == "rational" else k / denominator
            edges.append(Edge("e{}.{}".format(i, j), i, j, {str(i): str(j)}, {str(i): p}))
    space = PointSpace(labels, {x: int(x) for x in labels})
    return MarkovSystem(space, edges, {int(x): x for x in labels}, name="random-{}".format(states),
                        arithmetic=arithmetic)


def simulate(sys, x, steps, rng):
    """Forward path of the chain from x: list of (edge symbol, point reached)"""
    path = []
    for _ in range(steps):
        options = sys.transitions(x)
        u = rng.random()
        acc = 0.0
        chosen = options[-1]
        for option in options:
            acc += float(option[1])
            if u < acc:
                chosen = option
                break
        x = chosen[2]
        path.append((chosen[0], x))
    return path
