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
import sys

import yaml

from ddm.reportbase import ReportBase, ReportException

FORMATS = ("json", "csv", "yaml")


def _flatten(prefix, value, row):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten("{}.{}".format(prefix, k) if prefix else str(k), v, row)
    elif isinstance(value, list):
        row[prefix] = json.dumps(value)
    else:
        row[prefix] = value


def result_table(results):
    """
    Rows for tabular output: the first list of mappings found in the results, otherwise one row with
    the flattened scalar results
    """
    if isinstance(results, list) and results and all(isinstance(r, dict) for r in results):
        rows = results
    else:
        rows = None
        if isinstance(results, dict):
            for value in results.values():
                if isinstance(value, list) and value and all(isinstance(r, dict) for r in value):
                    rows = value
                    break
        if rows is None:
            rows = [results if isinstance(results, dict) else {"value": results}]
    out = []
    for r in rows:
        row = {}
        _flatten("", r, row)
        out.append(row)
    return out


class ReportLocal(ReportBase):

    def __init__(self, logger_name='ddm.report', lock=False):
        super().__init__(logger_name, lock)
        self.format = "json"
        self.path = None
        self.stream = None

    def get_params(self):
        return {"report": "local", "format": self.format, "path": self.path}

    def report_connect(self, config):
        try:
            if "logger_name" in config:
                self.logger = logging.getLogger(config["logger_name"])
            if "loglevel" in config:
                self.logger.setLevel(getattr(logging, config["loglevel"]))
            self.format = config.get("format") or "json"
            if self.format not in FORMATS:
                raise ReportException("Invalid configuration param at '[output]': format '{}' is not one of {}".format(
                    self.format, ", ".join(FORMATS)))
            self.path = config.get("path")
            self.stream = config.get("stream")
        except ReportException:
            raise
        except Exception as e:
            raise ReportException(str(e))

    def report_disconnect(self):
        with self.lock:
            stream = self.stream or (None if self.path else sys.stdout)
            if stream is not None:
                stream.flush()
            self.stream = None

    def serialize(self, report):
        content = report.to_dict()
        if self.format == "json":
            return json.dumps(content, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        if self.format == "yaml":
            return yaml.safe_dump(content, sort_keys=True, allow_unicode=True)
        rows = result_table(content["results"])
        fields = []
        for row in rows:
            fields.extend(k for k in row if k not in fields)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()

    def write(self, report):
        text = self.serialize(report)
        with self.lock:
            if self.path:
                try:
                    with open(self.path, "w") as f:
                        f.write(text)
                except IOError as e:
                    raise ReportException("File {} cannot be written: {}".format(self.path, e))
                self.logger.info("report written to {}".format(self.path))
            else:
                (self.stream or sys.stdout).write(text)
        return text
