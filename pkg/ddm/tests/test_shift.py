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
from hypothesis import given, settings
from hypothesis import strategies as st

from ddm.shift import (Alphabet, Cylinder, CylinderSet, Direction, Relation, ShiftException, disjointify,
                       format_cylinder, format_cylinder_set, parse_cylinder, parse_cylinder_set, refine, relation,
                       set_member, shift_preimage, subtract, intersect, window_points)

AB = Alphabet(("a", "b"))
LO, HI = -2, 4


def exception_message(message):
    return "shift exception " + message


def points_of(s, alphabet=AB, lo=LO, hi=HI):
    if isinstance(s, Cylinder):
        s = CylinderSet(alphabet, [s])
    return frozenset(p for p in window_points(alphabet, lo, hi) if set_member(s, lo, p))


@st.composite
def cylinders(draw):
    start = draw(st.integers(min_value=-2, max_value=2))
    word = draw(st.lists(st.sampled_from(AB.symbols), min_size=1, max_size=3))
    return Cylinder(start, tuple(word), AB)


@st.composite
def cylinder_sets(draw):
    return CylinderSet.from_cylinders(AB, draw(st.lists(cylinders(), max_size=3)))


@pytest.mark.parametrize("symbols, message", [
    ((), "alphabet must not be empty"),
    (("a", "a"), "alphabet symbols must be unique"),
    (("a|b",), "symbol 'a|b' contains a reserved character"),
    (("",), "symbol '' must be a non-empty string")])
def test_alphabet_invalid(symbols, message):
    with pytest.raises(ShiftException) as excinfo:
        Alphabet(symbols)
    assert str(excinfo.value).startswith(exception_message(message))
    assert excinfo.value.exit_code == 2


def test_cylinder_invalid():
    with pytest.raises(ShiftException) as excinfo:
        Cylinder(0, (), AB)
    assert str(excinfo.value).startswith(exception_message("cylinder word must not be empty"))
    with pytest.raises(ShiftException) as excinfo:
        Cylinder(0, ("c",), AB)
    assert str(excinfo.value).startswith(exception_message("symbol 'c' is not in the alphabet"))


@pytest.mark.parametrize("a, b, expected", [
    (Cylinder(0, ("a",), AB), Cylinder(0, ("b",), AB), Relation.DISJOINT),
    (Cylinder(0, ("a",), AB), Cylinder(0, ("a", "b"), AB), Relation.A_CONTAINS_B),
    (Cylinder(0, ("a", "b"), AB), Cylinder(1, ("b",), AB), Relation.B_CONTAINS_A),
    (Cylinder(0, ("a",), AB), Cylinder(1, ("b",), AB), Relation.NEITHER),
    (Cylinder(-1, ("b", "a"), AB), Cylinder(-1, ("b", "a"), AB), Relation.EQUAL),
    (Cylinder(-1, ("b", "a"), AB), Cylinder(0, ("b",), AB), Relation.DISJOINT)])
def test_relation(a, b, expected):
    assert relation(a, b) is expected
    assert relation(b, a) is expected.swapped()


def test_relation_single_symbol():
    one = Alphabet(("x",))
    assert relation(Cylinder(0, ("x",), one), Cylinder(5, ("x", "x"), one)) is Relation.EQUAL


def test_refine():
    c = Cylinder(0, ("a",), AB)
    assert refine(c, Direction.PAST) == [Cylinder(-1, ("a", "a"), AB), Cylinder(-1, ("b", "a"), AB)]
    assert refine(c, "future") == [Cylinder(0, ("a", "a"), AB), Cylinder(0, ("a", "b"), AB)]
    with pytest.raises(ShiftException):
        refine(Cylinder(0, ("a",)), Direction.PAST)


def test_subtract_example():
    assert subtract(Cylinder(0, ("a",), AB), Cylinder(0, ("a", "b"), AB)) == [Cylinder(0, ("a", "a"), AB)]
    assert subtract(Cylinder(0, ("a", "b"), AB), Cylinder(0, ("a",), AB)) == []


@settings(max_examples=200, deadline=None)
@given(cylinders(), cylinders())
def test_relation_matches_points(a, b):
    pa, pb = points_of(a), points_of(b)
    rel = relation(a, b)
    if rel is Relation.DISJOINT:
        assert not pa & pb
    elif rel is Relation.EQUAL:
        assert pa == pb
    elif rel is Relation.A_CONTAINS_B:
        assert pb < pa
    elif rel is Relation.B_CONTAINS_A:
        assert pa < pb
    else:
        assert pa & pb and not pa <= pb and not pb <= pa


@settings(max_examples=200, deadline=None)
@given(cylinders(), cylinders())
def test_subtract_and_intersect_split(a, b):
    outside = subtract(a, b)
    inside = intersect(a, b)
    pieces = [points_of(c) for c in outside + inside]
    assert sum(len(p) for p in pieces) == len(points_of(a))
    assert frozenset().union(*pieces) == points_of(a)
    assert frozenset().union(*(points_of(c) for c in inside)) == points_of(a) & points_of(b)


@settings(max_examples=150, deadline=None)
@given(cylinder_sets(), cylinder_sets())
def test_set_algebra(s, t):
    ps, pt = points_of(s), points_of(t)
    assert points_of(s.union(t)) == ps | pt
    assert points_of(s.intersection(t)) == ps & pt
    assert points_of(s.difference(t)) == ps - pt
    assert s.contains(t) == (pt <= ps)
    for a, b in zip(s.parts, s.parts[1:]):
        assert relation(a, b) is Relation.DISJOINT


def test_cylinder_set_rejects_overlap():
    with pytest.raises(ShiftException) as excinfo:
        CylinderSet(AB, [Cylinder(0, ("a",), AB), Cylinder(0, ("a", "b"), AB)])
    assert str(excinfo.value).startswith(exception_message("parts"))


def test_full_and_empty():
    full = CylinderSet.full(AB, 3)
    assert [str(p) for p in full] == ["m=3;w=a", "m=3;w=b"]
    assert full.same_points(CylinderSet.full(AB, -1))
    assert CylinderSet.empty(AB).is_empty()
    assert CylinderSet.empty(AB).window() is None
    assert full.window() == (3, 3)


def test_shift_preimage():
    s = parse_cylinder_set("m=-1;w=a,b|m=2;w=b", AB)
    assert format_cylinder_set(shift_preimage(s)) == "m=0;w=a,b|m=3;w=b"


def test_disjointify():
    c0 = CylinderSet(AB, [Cylinder(0, ("a",), AB)])
    c1 = CylinderSet(AB, [Cylinder(-1, ("a", "a"), AB), Cylinder(-1, ("b", "b"), AB)])
    out = disjointify([(-1, c1), (0, c0)])
    assert [m for m, _ in out] == [0, -1]
    assert out[0][1] == c0
    assert format_cylinder_set(out[1][1]) == "m=-1;w=b,b"
    with pytest.raises(ShiftException) as excinfo:
        disjointify([(1, c0)])
    assert str(excinfo.value).startswith(exception_message("cover depth 1 is positive"))
    with pytest.raises(ShiftException):
        disjointify([(0, c1)])


@pytest.mark.parametrize("text, start, word", [
    ("m=-2;w=a,b", -2, ("a", "b")),
    (" m=3 ; w=b ", 3, ("b",)),
    ("w=a;m=0", 0, ("a",))])
def test_parse_cylinder(text, start, word):
    c = parse_cylinder(text, AB)
    assert (c.start, c.word) == (start, word)
    assert parse_cylinder(format_cylinder(c), AB) == c


@pytest.mark.parametrize("text", ["m=x;w=a", "w=a", "m=0;w=a,,b", "m=0;w=a;m=1", "m0;w=a"])
def test_parse_cylinder_invalid(text):
    with pytest.raises(ShiftException) as excinfo:
        parse_cylinder(text, AB)
    assert str(excinfo.value).startswith(exception_message(""))
    assert "cylinder '{}'".format(text) in str(excinfo.value)


def test_parse_cylinder_set():
    assert parse_cylinder_set("-", AB).is_empty()
    assert parse_cylinder_set("", AB).is_empty()
    merged = parse_cylinder_set("m=0;w=a|m=0;w=a,b", AB)
    assert format_cylinder_set(merged) == "m=0;w=a"
    assert format_cylinder_set(CylinderSet.empty(AB)) == "-"
