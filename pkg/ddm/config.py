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
System files, embedded presets, initial distributions and the run configuration.

System files are TOML:

    name = "g1"
    contraction_constant = 0.6          # optional

    [space]
    kind = "points"                     # or "interval" with bounds = [lo, hi]
    points = ["1", "2"]
    partition = {1 = 1, 2 = 2}          # interval: [[a, b, state], ...]

    [base_points]
    1 = "1"

    [[edge]]
    symbol = "e11"
    source = 1
    target = 1
    map = {1 = "1"}                     # interval: [slope, intercept]
    prob = {1 = "7/10"}                 # interval: polynomial coefficients; "rest" on either

A file holding a [measure] table instead describes a measure given directly on the shift space.
"""

import logging
import os
import re
from copy import deepcopy

import yaml

from ddm.common_utils import ARITHMETICS, to_number
from ddm.markovsystem import (REST, Edge, IntervalSpace, MarkovSystem, PointMeasure, PointSpace, SystemException,
                              initial_uniform, stationary_distribution, validate_system)
from ddm.measurebase import MeasureBase
from ddm.measuredirac import DiracSequenceMeasure
from ddm.measurepath import MarkovPathMeasure
from ddm.shift import Alphabet, ShiftException

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

logger = logging.getLogger("ddm.config")


class ConfigException(Exception):

    def __init__(self, message, exit_code=2, line=None, column=None, findings=None):
        self.exit_code = exit_code
        self.line = line
        self.column = column
        self.findings = findings or []
        Exception.__init__(self, "config exception " + str(message))


PRESETS = {
    "g1": """
name = "g1"

[space]
kind = "points"
points = ["1", "2"]
partition = {1 = 1, 2 = 2}

[base_points]
1 = "1"
2 = "2"

[[edge]]
symbol = "e11"
source = 1
target = 1
map = {1 = "1"}
prob = {1 = "7/10"}

[[edge]]
symbol = "e12"
source = 1
target = 2
map = {1 = "2"}
prob = {1 = "3/10"}

[[edge]]
symbol = "e21"
source = 2
target = 1
map = {2 = "1"}
prob = {2 = "2/5"}

[[edge]]
symbol = "e22"
source = 2
target = 2
map = {2 = "2"}
prob = {2 = "3/5"}
""",
    "g2": """
name = "g2"

[measure]
kind = "dirac-sequence"
alphabet = ["0", "1"]
pattern = ["0", "1"]
phase = 0
""",
    "g3": """
name = "g3"
contraction_constant = 0.6

[space]
kind = "interval"
bounds = [0.0, 1.0]
partition = [[0.0, 1.0, 1]]

[base_points]
1 = 0.0

[[edge]]
symbol = "0"
source = 1
target = 1
map = [0.5, 0.0]
prob = ["1/3", "1/3"]

[[edge]]
symbol = "1"
source = 1
target = 1
map = [0.5, 0.5]
prob = "rest"
""",
}


def _parse_error(e):
    line = getattr(e, "lineno", None)
    column = getattr(e, "colno", None)
    if line is None:
        found = re.search(r"line (\d+), column (\d+)", str(e))
        if found:
            line, column = int(found.group(1)), int(found.group(2))
    return ConfigException("cannot parse system file: {}".format(e), line=line, column=column)


def read_system_text(spec):
    """TOML text of a preset name or a file path"""
    if spec in PRESETS:
        return PRESETS[spec]
    if not os.path.isfile(spec):
        raise ConfigException("'{}' is neither a preset ({}) nor an existing file".format(spec, ", ".join(PRESETS)))
    try:
        with open(spec, "r") as f:
            return f.read()
    except IOError as e:
        raise ConfigException("cannot read '{}': {}".format(spec, e))


def _require(table, key, where):
    if key not in table:
        raise ConfigException("{} is missing key '{}'".format(where, key))
    return table[key]


def _number(value, arithmetic, where):
    try:
        return to_number(value, arithmetic)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ConfigException("{}: '{}' is not a number".format(where, value))


def _build_space(table):
    kind = _require(table, "kind", "[space]")
    if kind == "points":
        points = [str(p) for p in _require(table, "points", "[space]")]
        partition = {str(k): int(v) for k, v in _require(table, "partition", "[space]").items()}
        return PointSpace(points, partition, table.get("metric"))
    if kind == "interval":
        lo, hi = _require(table, "bounds", "[space]")
        return IntervalSpace(lo, hi, _require(table, "partition", "[space]"))
    raise ConfigException("[space] kind must be 'points' or 'interval', not '{}'".format(kind))


def _build_edge(index, table, kind, arithmetic):
    where = "[[edge]] number {}".format(index + 1)
    symbol = str(_require(table, "symbol", where))
    source = int(_require(table, "source", where))
    target = int(_require(table, "target", where))
    raw_map = _require(table, "map", where)
    raw_prob = _require(table, "prob", where)
    if kind == "points":
        mapping = {str(k): str(v) for k, v in raw_map.items()}
        if raw_prob == REST:
            prob = REST
        else:
            prob = {str(k): _number(v, arithmetic, where) for k, v in raw_prob.items()}
    else:
        mapping = tuple(_number(v, "float", where) for v in raw_map)
        if len(mapping) != 2:
            raise ConfigException("{}: interval maps are [slope, intercept]".format(where))
        prob = REST if raw_prob == REST else [_number(v, "float", where) for v in raw_prob]
    return Edge(symbol, source, target, mapping, prob)


def _build_measure(name, table):
    kind = _require(table, "kind", "[measure]")
    if kind != "dirac-sequence":
        raise ConfigException("[measure] kind must be 'dirac-sequence', not '{}'".format(kind))
    alphabet = Alphabet(tuple(str(s) for s in _require(table, "alphabet", "[measure]")))
    overrides = {int(k): str(v) for k, v in table.get("overrides", {}).items()}
    return DiracSequenceMeasure(alphabet, [str(s) for s in _require(table, "pattern", "[measure]")],
                                table.get("phase", 0), overrides, logger_name="ddm.measure.{}".format(name))


def load_system(spec, arithmetic="float", validate=True):
    """
    Builds a Markov system, or a measure given directly on the shift space
    :param spec: preset name (g1, g2, g3) or TOML file path
    :param arithmetic: "float" or "rational" (finite point spaces only)
    :param validate: raise ConfigException carrying the findings when validate_system reports any
    :return: MarkovSystem or MeasureBase
    """
    if arithmetic not in ARITHMETICS:
        raise ConfigException("arithmetic must be one of {}".format(", ".join(ARITHMETICS)))
    text = read_system_text(spec)
    try:
        content = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise _parse_error(e)
    name = content.get("name", os.path.splitext(os.path.basename(spec))[0])
    try:
        if "measure" in content:
            return _build_measure(name, content["measure"])
        space = _build_space(_require(content, "space", "system file"))
        edge_tables = _require(content, "edge", "system file")
        edges = [_build_edge(i, e, space.kind, arithmetic) for i, e in enumerate(edge_tables)]
        base_points = {}
        for state, point in _require(content, "base_points", "system file").items():
            base_points[int(state)] = str(point) if space.kind == "points" else float(point)
        constant = content.get("contraction_constant")
        if constant is not None:
            constant = _number(constant, "float", "contraction_constant")
        system = MarkovSystem(space, edges, base_points, constant, name, arithmetic)
    except (SystemException, ShiftException) as e:
        raise ConfigException(str(e))
    except (TypeError, ValueError) as e:
        raise ConfigException("malformed system file: {}".format(e))
    if validate:
        findings = validate_system(system)
        if findings:
            raise ConfigException("system '{}' violates {}".format(name, ", ".join(
                sorted(set(f["invariant"] for f in findings)))), exit_code=1, findings=findings)
    logger.debug("loaded system '{}' with {} edges".format(name, len(system.edges)))
    return system


def _point(system, text):
    if system.space.kind == "points":
        return str(text)
    return float(text)


def read_initial_file(system, path, arithmetic):
    """YAML mapping point -> weight, or list of {point, weight}"""
    try:
        with open(path, "r") as f:
            content = yaml.safe_load(f)
    except IOError as e:
        raise ConfigException("cannot read initial distribution '{}': {}".format(path, e))
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigException("cannot parse initial distribution '{}': {}".format(path, e),
                              line=mark.line + 1 if mark else None, column=mark.column + 1 if mark else None)
    if isinstance(content, dict):
        items = list(content.items())
    elif isinstance(content, list):
        try:
            items = [(a["point"], a["weight"]) for a in content]
        except (KeyError, TypeError):
            raise ConfigException("initial distribution list entries need 'point' and 'weight'")
    else:
        raise ConfigException("initial distribution must be a mapping or a list")
    atoms = [(_point(system, x), _number(w, arithmetic, "initial distribution")) for x, w in items]
    try:
        for x, _ in atoms:
            system.cell(x)
        return PointMeasure(atoms, sort_key=system.space.sort_key)
    except SystemException as e:
        raise ConfigException(str(e))


def resolve_initial(system, spec="nu0", arithmetic="float"):
    """
    Initial distribution from its text form
    :param spec: "nu0", "nuprime:<state>,<state>", "dirac:<point>", "stationary" or "file:<yaml path>"
    :return: PointMeasure, or None for measures given on the shift space
    """
    if isinstance(system, MeasureBase):
        return None
    spec = spec or "nu0"
    kind, _, value = spec.partition(":")
    try:
        if kind == "nu0":
            return initial_uniform(system)
        if kind == "nuprime":
            return initial_uniform(system, [int(s) for s in value.split(",") if s.strip()])
        if kind == "dirac":
            point = _point(system, value)
            system.cell(point)
            return PointMeasure.dirac(point, system.one())
        if kind == "stationary":
            return stationary_distribution(system).measure
        if kind == "file":
            return read_initial_file(system, value, arithmetic)
    except (SystemException, ValueError) as e:
        raise ConfigException("initial distribution '{}': {}".format(spec, e))
    raise ConfigException("unknown initial distribution '{}'".format(spec))


def measure_for(system, nu):
    """The family (φ_m) a command works on"""
    if isinstance(system, MeasureBase):
        return system
    return MarkovPathMeasure(system, nu, logger_name="ddm.measure.{}".format(system.name))


DEFAULT_RUN_CONFIG = {
    "system": "g1",
    "initial": "nu0",
    "arithmetic": "float",
    "cover": {"past_depth": 4, "future_depth": 0, "node_budget": 1000000},
    "output": {"format": "json", "path": None},
    "workers": 1,
    "seed": 0,
    "loglevel": "WARNING",
}


def deep_update(dict_to_change, dict_reference, key_list=None):
    """
    Modifies one dictionary with the information of the other following https://tools.ietf.org/html/rfc7396
    Basically is a recursive python 'dict_to_change.update(dict_reference)', but a value of None is used to delete.
    Lists are replaced as a whole.
    :param dict_to_change:  Target dictionary to be changed.
    :param dict_reference: Dictionary that contains changes to be applied.
    :param key_list: This is used internally for recursive calls. Do not fill this parameter.
    :return: none
    """
    if key_list is None:
        key_list = []
    if not isinstance(dict_reference, dict):
        raise ConfigException("Expecting a dictionary at '{}'".format(":".join(key_list)))
    key_list.append("")
    for k in dict_reference:
        key_list[-1] = str(k)
        if dict_reference[k] is None:   # None->Anything
            if k in dict_to_change:
                del dict_to_change[k]
        elif not isinstance(dict_reference[k], dict):  # NotDict->Anything
            dict_to_change[k] = deepcopy(dict_reference[k])
        elif k not in dict_to_change or not isinstance(dict_to_change[k], dict):  # Dict->Empty or NotDict
            dict_to_change[k] = {}
            # calling deep_update to drop the None values
            deep_update(dict_to_change[k], dict_reference[k], key_list)
        else:       # Dict->Dict
            deep_update(dict_to_change[k], dict_reference[k], key_list)
    key_list.pop()


def run_config(overrides=None):
    """Defaults merged with the given overrides"""
    config = deepcopy(DEFAULT_RUN_CONFIG)
    if overrides:
        deep_update(config, overrides)
    return config
