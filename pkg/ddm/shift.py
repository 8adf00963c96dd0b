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
Anchored cylinders of the two-sided shift and the finite set algebra built on them.

A cylinder _m[e_m,...,e_n] is stored as its absolute start index m and its word. Points of the
shift space are never materialised: set relations are decided on the constrained coordinates,
and a finite coordinate window can be enumerated when a brute force comparison is wanted.
"""

import itertools
from dataclasses import dataclass, field
from enum import Enum

EMPTY_SET_TEXT = "-"


class ShiftException(Exception):

    def __init__(self, message, exit_code=2):
        self.exit_code = exit_code
        Exception.__init__(self, "shift exception " + str(message))


class Relation(Enum):
    EQUAL = "equal"
    DISJOINT = "disjoint"
    A_CONTAINS_B = "a_contains_b"
    B_CONTAINS_A = "b_contains_a"
    NEITHER = "neither"

    def swapped(self):
        if self is Relation.A_CONTAINS_B:
            return Relation.B_CONTAINS_A
        if self is Relation.B_CONTAINS_A:
            return Relation.A_CONTAINS_B
        return self


class Direction(Enum):
    PAST = "past"
    FUTURE = "future"


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ShiftException("alphabet must not be empty")
        for s in symbols:
            if not isinstance(s, str) or not s:
                raise ShiftException("symbol '{}' must be a non-empty string".format(s))
            if any(c in s for c in ",;|= "):
                raise ShiftException("symbol '{}' contains a reserved character".format(s))
        if len(set(symbols)) != len(symbols):
            raise ShiftException("alphabet symbols must be unique: {}".format(list(symbols)))
        object.__setattr__(self, "symbols", symbols)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self.symbols

    def index(self, symbol):
        return self.symbols.index(symbol)


@dataclass(frozen=True, order=True)
class Cylinder:
    start: int
    word: tuple
    alphabet: Alphabet = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if isinstance(self.start, bool) or not isinstance(self.start, int):
            raise ShiftException("cylinder start must be an integer, got '{}'".format(self.start))
        word = tuple(self.word)
        if not word:
            raise ShiftException("cylinder word must not be empty")
        if self.alphabet is not None:
            for s in word:
                if s not in self.alphabet:
                    raise ShiftException("symbol '{}' is not in the alphabet".format(s))
        object.__setattr__(self, "word", word)

    @property
    def end(self):
        return self.start + len(self.word) - 1

    def __len__(self):
        return len(self.word)

    def symbol_at(self, index):
        return self.word[index - self.start]

    def with_alphabet(self, alphabet):
        if self.alphabet is alphabet:
            return self
        return Cylinder(self.start, self.word, alphabet)

    def shifted(self, k):
        """Cylinder moved k coordinates to the future, S^{-k} of this set"""
        return Cylinder(self.start + k, self.word, self.alphabet)

    def __str__(self):
        return format_cylinder(self)


def _common_alphabet(a, b):
    if a.alphabet is not None and b.alphabet is not None and a.alphabet != b.alphabet:
        raise ShiftException("cylinders over different alphabets")
    return a.alphabet if a.alphabet is not None else b.alphabet


def relation(a, b):
    """
    Exact set relation between two cylinders
    :param a: Cylinder
    :param b: Cylinder
    :return: Relation
    """
    alphabet = _common_alphabet(a, b)
    if alphabet is not None and len(alphabet) == 1:
        # the shift over one symbol is a single point
        return Relation.EQUAL
    for index in range(max(a.start, b.start), min(a.end, b.end) + 1):
        if a.symbol_at(index) != b.symbol_at(index):
            return Relation.DISJOINT
    b_window_inside_a = a.start <= b.start and b.end <= a.end
    a_window_inside_b = b.start <= a.start and a.end <= b.end
    if a_window_inside_b and b_window_inside_a:
        return Relation.EQUAL
    if b_window_inside_a:
        # a fixes every coordinate b does, so a lies inside b
        return Relation.B_CONTAINS_A
    if a_window_inside_b:
        return Relation.A_CONTAINS_B
    return Relation.NEITHER


def refine(c, direction, alphabet=None):
    """
    Splits a cylinder into |E| children by one more coordinate
    :param c: Cylinder
    :param direction: Direction.PAST adds coordinate start-1, Direction.FUTURE adds end+1
    :param alphabet: needed when the cylinder carries none
    :return: list of Cylinder, in alphabet order
    """
    alphabet = alphabet or c.alphabet
    if alphabet is None:
        raise ShiftException("refine needs an alphabet")
    direction = Direction(direction)
    if direction is Direction.PAST:
        return [Cylinder(c.start - 1, (e,) + c.word, alphabet) for e in alphabet]
    return [Cylinder(c.start, c.word + (e,), alphabet) for e in alphabet]


def _toward(a, b, alphabet):
    # one refinement step of a in the direction where b still constrains more coordinates
    if b.start < a.start:
        return refine(a, Direction.PAST, alphabet)
    return refine(a, Direction.FUTURE, alphabet)


def subtract(a, b):
    """a \\ b as a list of pairwise disjoint cylinders"""
    alphabet = _common_alphabet(a, b)
    rel = relation(a, b)
    if rel is Relation.DISJOINT:
        return [a]
    if rel in (Relation.EQUAL, Relation.B_CONTAINS_A):
        return []
    out = []
    for child in _toward(a, b, alphabet):
        out.extend(subtract(child, b))
    return out


def intersect(a, b):
    """a ∩ b as a list of pairwise disjoint cylinders"""
    alphabet = _common_alphabet(a, b)
    rel = relation(a, b)
    if rel is Relation.DISJOINT:
        return []
    if rel in (Relation.EQUAL, Relation.B_CONTAINS_A):
        return [a]
    if rel is Relation.A_CONTAINS_B:
        return [b]
    out = []
    for child in _toward(a, b, alphabet):
        out.extend(intersect(child, b))
    return out


class CylinderSet(object):
    """
    Finite disjoint union of cylinders, kept sorted by start index then word with duplicates removed.
    Instances are immutable.
    """

    __slots__ = ("alphabet", "parts")

    def __init__(self, alphabet, parts=(), check=True):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        unique = sorted(set(p.with_alphabet(alphabet) for p in parts))
        if check:
            for a, b in itertools.combinations(unique, 2):
                if relation(a, b) is not Relation.DISJOINT:
                    raise ShiftException("parts {} and {} are not disjoint".format(a, b))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "parts", tuple(unique))

    def __setattr__(self, key, value):
        raise AttributeError("CylinderSet is immutable")

    @classmethod
    def empty(cls, alphabet):
        return cls(alphabet, ())

    @classmethod
    def full(cls, alphabet, start=0):
        """The whole shift space written as the |E| cylinders at one coordinate"""
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        return cls(alphabet, [Cylinder(start, (e,), alphabet) for e in alphabet], check=False)

    @classmethod
    def from_cylinders(cls, alphabet, cylinders):
        """Union of possibly overlapping cylinders"""
        result = cls.empty(alphabet)
        for c in cylinders:
            result = result.union(cls(alphabet, [c], check=False))
        return result

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        return isinstance(other, CylinderSet) and self.alphabet == other.alphabet and self.parts == other.parts

    def __hash__(self):
        return hash((self.alphabet, self.parts))

    def __repr__(self):
        return "CylinderSet({!r})".format(format_cylinder_set(self))

    def __str__(self):
        return format_cylinder_set(self)

    def is_empty(self):
        return not self.parts

    def window(self):
        """(lo, hi) coordinates constrained by some part, None for the empty set"""
        if not self.parts:
            return None
        return min(p.start for p in self.parts), max(p.end for p in self.parts)

    def _check_alphabet(self, other):
        if self.alphabet != other.alphabet:
            raise ShiftException("cylinder sets over different alphabets")

    def difference(self, other):
        self._check_alphabet(other)
        pieces = list(self.parts)
        for b in other.parts:
            b = b.with_alphabet(self.alphabet)
            next_pieces = []
            for a in pieces:
                next_pieces.extend(subtract(a, b))
            pieces = next_pieces
        return CylinderSet(self.alphabet, pieces, check=False)

    def union(self, other):
        self._check_alphabet(other)
        return CylinderSet(self.alphabet, list(self.parts) + list(other.difference(self).parts), check=False)

    def intersection(self, other):
        self._check_alphabet(other)
        pieces = []
        for a in self.parts:
            for b in other.parts:
                pieces.extend(intersect(a, b.with_alphabet(self.alphabet)))
        return CylinderSet(self.alphabet, pieces, check=False)

    def intersects(self, cylinder):
        return any(relation(p, cylinder) is not Relation.DISJOINT for p in self.parts)

    def contains(self, other):
        """Point set inclusion other ⊂ self"""
        return other.difference(self).is_empty()

    def same_points(self, other):
        return self.contains(other) and other.contains(self)

    def shifted(self, k):
        return CylinderSet(self.alphabet, [p.shifted(k) for p in self.parts], check=False)


def shift_preimage(s):
    """S^{-1}(s): every start index moves one coordinate to the future"""
    return s.shifted(1)


def disjointify(c_list):
    """
    Turns a cover indexed by depth into a disjoint one: B_m = C_m minus the union of C_k for k > m
    :param c_list: iterable of (depth m, CylinderSet C_m), parts of C_m must start at index >= m
    :return: list of (depth m, CylinderSet B_m), shallowest depth first
    """
    by_depth = {}
    alphabet = None
    for m, c_m in c_list:
        if m > 0:
            raise ShiftException("cover depth {} is positive".format(m))
        for p in c_m.parts:
            if p.start < m:
                raise ShiftException("part {} starts before its depth {}".format(p, m))
        if alphabet is None:
            alphabet = c_m.alphabet
        elif alphabet != c_m.alphabet:
            raise ShiftException("cover sets over different alphabets")
        by_depth[m] = by_depth[m].union(c_m) if m in by_depth else c_m
    if alphabet is None:
        return []
    out = []
    later = CylinderSet.empty(alphabet)
    for m in sorted(by_depth, reverse=True):
        out.append((m, by_depth[m].difference(later)))
        later = later.union(by_depth[m])
    return out


def format_cylinder(c):
    return "m={};w={}".format(c.start, ",".join(c.word))


def format_cylinder_set(s):
    if s.is_empty():
        return EMPTY_SET_TEXT
    return "|".join(format_cylinder(p) for p in s.parts)


def parse_cylinder(text, alphabet=None):
    """
    Parses the text syntax m=<int>;w=<sym>(,<sym>)*
    :param text: e.g. "m=-2;w=a,b,c"
    :param alphabet: optional Alphabet the symbols are checked against
    :return: Cylinder
    """
    fields = {}
    for item in text.strip().split(";"):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in ("m", "w") or key in fields:
            raise ShiftException("cannot parse cylinder '{}'".format(text))
        fields[key] = value.strip()
    if set(fields) != {"m", "w"}:
        raise ShiftException("cylinder '{}' needs both m and w".format(text))
    try:
        start = int(fields["m"])
    except ValueError:
        raise ShiftException("cylinder '{}' has a non integer start".format(text))
    word = tuple(s.strip() for s in fields["w"].split(","))
    if any(not s for s in word):
        raise ShiftException("cylinder '{}' has an empty symbol".format(text))
    return Cylinder(start, word, alphabet)


def parse_cylinder_set(text, alphabet):
    """
    Parses "|"-separated cylinders; "-" or an empty string is the empty set.
    Overlapping parts are accepted and merged into a disjoint union
    """
    text = text.strip()
    if text in ("", EMPTY_SET_TEXT):
        return CylinderSet.empty(alphabet)
    cylinders = [parse_cylinder(part, alphabet) for part in text.split("|")]
    return CylinderSet.from_cylinders(alphabet, cylinders)


def window_points(alphabet, lo, hi):
    """All words on the coordinate window [lo, hi], in alphabet order"""
    if hi < lo:
        return iter([()])
    return itertools.product(alphabet.symbols, repeat=hi - lo + 1)


def member(c, lo, point):
    """Whether the window point (a word anchored at lo) lies in cylinder c"""
    return all(point[i - lo] == s for i, s in enumerate(c.word, start=c.start))


def set_member(s, lo, point):
    return any(member(p, lo, point) for p in s.parts)
