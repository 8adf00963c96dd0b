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

import csv
import io
import json
import logging
from fractions import Fraction
from unittest.mock import MagicMock

import pytest
import yaml

from ddm import version
from ddm.reportbase import Report, ReportBase, ReportException, canonical_json, determinism_hash
from ddm.reportlocal import ReportLocal, result_table


def exception_message(message):
    return "report exception " + message


@pytest.fixture(scope="function", params=[True, False])
def report_local(request):
    report = ReportLocal(lock=request.param)
    report.report_connect({"format": "json", "stream": io.StringIO()})
    return report


@pytest.fixture
def report():
    results = {"value": Fraction(4, 7), "profile": [1.0, 0.5], "rows": [{"k": 0, "v": 1.5}, {"k": 1, "v": -1}]}
    return Report("phi", {"system": "g1"}, results, exit_code=0)


def test_constructor_without_logger():
    report_local = ReportLocal()
    assert report_local.logger == logging.getLogger("ddm.report")
    assert report_local.get_params() == {"report": "local", "format": "json", "path": None}


def test_constructor_with_logger():
    assert ReportLocal(logger_name="ddm.out").logger == logging.getLogger("ddm.out")


def test_base_write_not_implemented(report):
    with pytest.raises(ReportException) as excinfo:
        ReportBase().write(report)
    assert str(excinfo.value).startswith(exception_message("Method 'write' not implemented"))
    with pytest.raises(ValueError):
        ReportBase(lock="no")


@pytest.mark.parametrize("fmt", ["json", "csv", "yaml"])
def test_report_connect(fmt):
    report_local = ReportLocal()
    report_local.report_connect({"format": fmt, "path": "/tmp/out", "logger_name": "ddm.other", "loglevel": "DEBUG"})
    assert report_local.get_params() == {"report": "local", "format": fmt, "path": "/tmp/out"}
    assert report_local.logger.name == "ddm.other"


def test_report_connect_invalid_format():
    with pytest.raises(ReportException) as excinfo:
        ReportLocal().report_connect({"format": "xml"})
    assert str(excinfo.value).startswith(exception_message(
        "Invalid configuration param at '[output]': format 'xml' is not one of json, csv, yaml"))


def test_write_json(report_local, report):
    text = report_local.write(report)
    assert report_local.stream.getvalue() == text
    content = json.loads(text)
    assert content["results"]["value"] == "4/7"
    assert content["provenance"] == {"tool": "ddm", "version": version}
    assert content["determinism_hash"] == report.determinism_hash
    assert content["exit_code"] == 0


def test_write_yaml(report):
    report_local = ReportLocal()
    stream = MagicMock()
    report_local.report_connect({"format": "yaml", "stream": stream})
    text = report_local.write(report)
    stream.write.assert_called_once_with(text)
    assert yaml.safe_load(text)["command"] == "phi"


def test_write_csv(report):
    report_local = ReportLocal()
    report_local.report_connect({"format": "csv", "stream": io.StringIO()})
    rows = list(csv.DictReader(io.StringIO(report_local.write(report))))
    assert rows == [{"k": "0", "v": "1.5"}, {"k": "1", "v": "-1"}]


def test_write_file(tmp_path, report):
    path = tmp_path / "report.json"
    report_local = ReportLocal()
    report_local.report_connect({"path": str(path)})
    text = report_local.write(report)
    assert path.read_text() == text


def test_write_file_error(tmp_path, report):
    report_local = ReportLocal()
    report_local.report_connect({"path": str(tmp_path / "missing" / "report.json")})
    with pytest.raises(ReportException) as excinfo:
        report_local.write(report)
    assert str(excinfo.value).startswith(exception_message("File {} cannot be written".format(
        tmp_path / "missing" / "report.json")))


def test_result_table():
    assert result_table({"a": 1, "b": {"c": 2}}) == [{"a": 1, "b.c": 2}]
    assert result_table([{"a": 1}, {"a": 2}]) == [{"a": 1}, {"a": 2}]
    assert result_table(3) == [{"value": 3}]
    assert result_table({"x": [1, 2]}) == [{"x": "[1, 2]"}]


def test_determinism_hash():
    first = Report("phi", {"seed": 0}, {"value": 0.5}, provenance={"host": "a"})
    second = Report("phi", {"seed": 1}, {"value": 0.5}, provenance={"host": "b"})
    assert first.determinism_hash == second.determinism_hash
    assert determinism_hash({"b": 1, "a": Fraction(1, 2)}) == determinism_hash({"a": "1/2", "b": 1})
    assert determinism_hash({"value": 0.5}) != determinism_hash({"value": 0.25})
    assert canonical_json({"b": [1, (2, 3)], "a": float("-inf")}) == '{"a":"-inf","b":[1,[2,3]]}'


def test_report_disconnect(report):
    report_local = ReportLocal()
    stream = MagicMock()
    report_local.report_connect({"format": "json", "stream": stream})
    report_local.write(report)
    report_local.report_disconnect()
    stream.flush.assert_called_once_with()
    assert report_local.stream is None


def test_report_disconnect_file(tmp_path, report):
    report_local = ReportLocal()
    report_local.report_connect({"path": str(tmp_path / "report.json")})
    report_local.write(report)
    report_local.report_disconnect()
    assert report_local.stream is None
