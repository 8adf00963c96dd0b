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

import unittest
from fractions import Fraction

import pytest

from ddm.config import (DEFAULT_RUN_CONFIG, PRESETS, ConfigException, deep_update, load_system, measure_for,
                        resolve_initial, run_config)
from ddm.markovsystem import MarkovSystem
from ddm.measuredirac import DiracSequenceMeasure
from ddm.measurepath import MarkovPathMeasure

ONE_STATE = """
name = "single"

[space]
kind = "points"
points = ["a"]
partition = {{a = 1}}

[base_points]
1 = "a"

[[edge]]
symbol = "s"
source = 1
target = 1
map = {{a = "a"}}
{prob}
"""


def exception_message(message):
    return "config exception " + message


@pytest.fixture
def system_file(tmp_path):
    def write(text, name="system.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


@pytest.fixture(scope="module")
def g1():
    return load_system("g1", "rational")


def test_presets():
    assert sorted(PRESETS) == ["g1", "g2", "g3"]
    g1 = load_system("g1")
    assert isinstance(g1, MarkovSystem)
    assert g1.name == "g1"
    assert g1.p("e11", "1") == 0.7
    assert isinstance(load_system("g2"), DiracSequenceMeasure)
    g3 = load_system("g3")
    assert g3.space.kind == "interval"
    assert g3.contraction_constant == 0.6
    assert g3.edges["0"].map == (0.5, 0.0)


def test_rational_preset(g1):
    assert g1.p("e12", "1") == Fraction(3, 10)


def test_unknown_system():
    with pytest.raises(ConfigException) as excinfo:
        load_system("nope")
    assert str(excinfo.value).startswith(exception_message("'nope' is neither a preset (g1, g2, g3)"))
    assert excinfo.value.exit_code == 2


def test_bad_arithmetic():
    with pytest.raises(ConfigException) as excinfo:
        load_system("g1", "decimal")
    assert str(excinfo.value).startswith(exception_message("arithmetic must be one of float, rational"))


def test_rational_interval():
    with pytest.raises(ConfigException) as excinfo:
        load_system("g3", "rational")
    assert "rational arithmetic needs a finite point space" in str(excinfo.value)


def test_parse_error_location(system_file):
    with pytest.raises(ConfigException) as excinfo:
        load_system(system_file('name = "x"\n[space\nkind = "points"\n'))
    assert str(excinfo.value).startswith(exception_message("cannot parse system file"))
    assert excinfo.value.line == 2


def test_missing_key(system_file):
    with pytest.raises(ConfigException) as excinfo:
        load_system(system_file(ONE_STATE.format(prob="")))
    assert str(excinfo.value).startswith(exception_message("[[edge]] number 1 is missing key 'prob'"))


def test_not_a_number(system_file):
    with pytest.raises(ConfigException) as excinfo:
        load_system(system_file(ONE_STATE.format(prob='prob = {a = "one"}')))
    assert str(excinfo.value).startswith(exception_message("[[edge]] number 1: 'one' is not a number"))


def test_rest_probability(system_file):
    sys = load_system(system_file(ONE_STATE.format(prob='prob = "rest"')), "rational")
    assert sys.p("s", "a") == 1


def test_validation_findings(system_file):
    with pytest.raises(ConfigException) as excinfo:
        load_system(system_file(ONE_STATE.format(prob='prob = {a = "1/2"}')), "rational")
    assert excinfo.value.exit_code == 1
    assert str(excinfo.value).startswith(exception_message("system 'single' violates probability-normalization"))
    assert excinfo.value.findings[0]["invariant"] == "probability-normalization"
    sys = load_system(system_file(ONE_STATE.format(prob='prob = {a = "1/2"}')), "rational", validate=False)
    assert sys.p("s", "a") == Fraction(1, 2)


def test_name_from_file(system_file):
    text = ONE_STATE.format(prob='prob = {a = 1}').replace('name = "single"', "")
    assert load_system(system_file(text, "loop.toml")).name == "loop"


@pytest.mark.parametrize("spec, atoms", [
    ("nu0", (("1", Fraction(1, 2)), ("2", Fraction(1, 2)))),
    (None, (("1", Fraction(1, 2)), ("2", Fraction(1, 2)))),
    ("nuprime:2", (("2", Fraction(1)),)),
    ("dirac:2", (("2", Fraction(1)),)),
    ("stationary", (("1", Fraction(4, 7)), ("2", Fraction(3, 7))))])
def test_resolve_initial(g1, spec, atoms):
    assert resolve_initial(g1, spec, "rational").atoms == atoms


@pytest.mark.parametrize("text", ['"1": 1/4\n"2": 3/4\n', '- {point: "1", weight: 1/4}\n- {point: 2, weight: 3/4}\n'])
def test_initial_file(g1, tmp_path, text):
    path = tmp_path / "initial.yaml"
    path.write_text(text)
    nu = resolve_initial(g1, "file:{}".format(path), "rational")
    assert nu.atoms == (("1", Fraction(1, 4)), ("2", Fraction(3, 4)))


def test_initial_file_errors(g1, tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("a: [1, 2\n")
    with pytest.raises(ConfigException) as excinfo:
        resolve_initial(g1, "file:{}".format(path))
    assert str(excinfo.value).startswith(exception_message("cannot parse initial distribution"))
    assert excinfo.value.line is not None
    path.write_text('"7": 1\n')
    with pytest.raises(ConfigException) as excinfo:
        resolve_initial(g1, "file:{}".format(path))
    assert "point '7' lies outside the state space" in str(excinfo.value)
    path.write_text("3\n")
    with pytest.raises(ConfigException):
        resolve_initial(g1, "file:{}".format(path))
    with pytest.raises(ConfigException):
        resolve_initial(g1, "file:{}".format(tmp_path / "missing.yaml"))


@pytest.mark.parametrize("spec, message", [
    ("uniform", "unknown initial distribution 'uniform'"),
    ("dirac:9", "initial distribution 'dirac:9': "),
    ("nuprime:", "initial distribution 'nuprime:': ")])
def test_resolve_initial_invalid(g1, spec, message):
    with pytest.raises(ConfigException) as excinfo:
        resolve_initial(g1, spec)
    assert str(excinfo.value).startswith(exception_message(message))


def test_measure_for(g1):
    g2 = load_system("g2")
    assert resolve_initial(g2, "nu0") is None
    assert measure_for(g2, None) is g2
    measure = measure_for(g1, resolve_initial(g1, "nu0", "rational"))
    assert isinstance(measure, MarkovPathMeasure)
    assert measure.logger.name == "ddm.measure.g1"


def test_run_config():
    config = run_config({"cover": {"past_depth": 6}, "seed": None, "output": {"format": "csv"}})
    assert config["cover"] == {"past_depth": 6, "future_depth": 0, "node_budget": 1000000}
    assert "seed" not in config
    assert config["output"] == {"format": "csv", "path": None}
    assert DEFAULT_RUN_CONFIG["cover"]["past_depth"] == 4
    assert run_config() == DEFAULT_RUN_CONFIG


class TestDeepUpdate(unittest.TestCase):
    def test_update_dict(self):
        # Original, patch, expected result
        TEST = (
            ({"a": "b"}, {"a": "c"}, {"a": "c"}),
            ({"a": "b"}, {"b": "c"}, {"a": "b", "b": "c"}),
            ({"a": "b"}, {"a": None}, {}),
            ({"a": "b", "b": "c"}, {"a": None}, {"b": "c"}),
            ({"a": ["b"]}, {"a": "c"}, {"a": "c"}),
            ({"a": "c"}, {"a": ["b"]}, {"a": ["b"]}),
            ({"a": {"b": "c"}}, {"a": {"b": "d", "c": None}}, {"a": {"b": "d"}}),
            ({"a": [{"b": "c"}]}, {"a": [1]}, {"a": [1]}),
            ({1: {"a": "b"}}, {1: ["c"]}, {1: ["c"]}),
            ({1: {"a": "foo"}}, {1: None}, {}),
            ({"e": None}, {"a": 1}, {"e": None, "a": 1}),
            ({1: [1, 2]}, {1: {"a": "b", "c": None}}, {1: {"a": "b"}}),
            ({}, {"a": {"bb": {"ccc": None}}}, {"a": {"bb": {}}}),
        )
        for t in TEST:
            deep_update(t[0], t[1])
            self.assertEqual(t[0], t[2])
        # the patch is deep copied, later edits of the patch do not reach the original
        test_original = {"cover": {"past_depth": 4}}
        test_patch = {"cover": {"window": {"lo": -4}}}
        test_result = {"cover": {"past_depth": 4, "window": {"lo": -4}}}
        deep_update(test_original, test_patch)
        self.assertEqual(test_original, test_result)
        test_patch["cover"]["window"]["hi"] = 0
        self.assertEqual(test_original, test_result)

    def test_update_badformat(self):
        for patch in (["a"], "a", 3):
            self.assertRaises(ConfigException, deep_update, {"a": 1}, patch)


if __name__ == '__main__':
    unittest.main()
