"""Online bin stretching at factor 3/2 - eps/6, exact rational arithmetic.

Reports are returned as dicts parsed from the JSON the C++ engine writes.
Rationals are strings such as "557/31".
"""

import json
from fractions import Fraction

from . import _bstretch
from ._bstretch import (
    audit_certificate,
    coefficient_provenance,
    constants,
    generate,
    m_threshold,
    oracle,
    patterns,
    profiles,
    verify_lps,
)

__all__ = [
    "audit_certificate",
    "coefficient_provenance",
    "constants",
    "exact",
    "generate",
    "m_threshold",
    "oracle",
    "patterns",
    "profiles",
    "replay",
    "run",
    "run_instance",
    "trace",
    "verify_lps",
]


def exact(value):
    """Fraction from a report number ({"exact": ..., "decimal": ...}) or a string."""
    if isinstance(value, dict):
        value = value["exact"]
    return Fraction(value)


def run(m, eps, seed=1, profile="mixed", order="shuffle", pattern=None, audit=None):
    return json.loads(_bstretch.run(m, str(eps), seed, profile, order, pattern, audit))


def run_instance(instance_text, audit=None):
    return json.loads(_bstretch.run_instance(instance_text, audit))


def trace(m, eps, seed=1, profile="mixed", order="shuffle", pattern=None):
    """(report dict, trace text)."""
    report, text = _bstretch.trace(m, str(eps), seed, profile, order, pattern)
    return json.loads(report), text


def replay(trace_text):
    return json.loads(_bstretch.replay(trace_text))
