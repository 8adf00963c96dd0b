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

import hashlib
import json
import logging
import os
from threading import Lock

from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from ddm import version
from ddm.common_utils import FakeLock, jsonable


class ReportException(Exception):

    def __init__(self, message, exit_code=2):
        self.exit_code = exit_code
        Exception.__init__(self, "report exception " + str(message))


def canonical_json(value):
    return json.dumps(jsonable(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


SCHEMA_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "report_schema.json")
_schema = None


def report_schema():
    """The published JSON schema of reports, read once from the package"""
    global _schema
    if _schema is None:
        with open(SCHEMA_PATH) as f:
            _schema = json.load(f)
    return _schema


def validate_report(content):
    """
    Checks a report in its dict form against the published schema
    :param content: dict as produced by Report.to_dict
    :return: None; raises ReportException naming the first offending field
    """
    error = best_match(Draft7Validator(report_schema()).iter_errors(content))
    if error is not None:
        where = "/".join(str(p) for p in error.absolute_path) or "report"
        raise ReportException("does not match the schema at '{}': {}".format(where, error.message))


def determinism_hash(results):
    """sha256 of the canonical JSON form of the results"""
    return hashlib.sha256(canonical_json(results).encode("utf-8")).hexdigest()


class Report(object):
    """
    Outcome of one command: the resolved run configuration, the results and the provenance.
    Only the results enter the determinism hash
    """

    def __init__(self, command, config, results, exit_code=0, provenance=None):
        self.command = command
        self.config = config
        self.results = results
        self.exit_code = exit_code
        self.provenance = {"tool": "ddm", "version": version}
        self.provenance.update(provenance or {})

    @property
    def determinism_hash(self):
        return determinism_hash(self.results)

    def to_dict(self):
        return jsonable({
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "exit_code": self.exit_code,
            "provenance": self.provenance,
            "determinism_hash": self.determinism_hash,
        })


class ReportBase(object):
    def __init__(self, logger_name='ddm.report', lock=False):
        """
        Constructor of ReportBase
        :param logger_name: logging name
        :param lock: Used to protect simultaneous access to the same instance class by several threads:
            False, None: Do not protect, this object will only be accessed by one thread
            True: This object needs to be protected by several threads accessing.
            Lock object. Use this Lock for the threads access protection
        """
        self.logger = logging.getLogger(logger_name)
        if not lock:
            self.lock = FakeLock()
        elif lock is True:
            self.lock = Lock()
        elif isinstance(lock, type(Lock())):
            self.lock = lock
        else:
            raise ValueError("lock parameter must be a Lock class or boolean")

    def get_params(self):
        return {}

    def report_connect(self, config):
        pass

    def report_disconnect(self):
        pass

    def write(self, report):
        """
        Emits one report
        :param report: Report
        :return: the serialized text
        """
        raise ReportException("Method 'write' not implemented")
