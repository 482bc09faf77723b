# SPDX-License-Identifier: Apache-2.0
"""Multi-modal program synthesis for regular expressions and CSS selectors."""

import json

from ._core import (
    Error,
    css_normalize,
    css_select,
    regex_match,
    regex_normalize,
    run_suite_json,
    select_qa_pairs,
    synthesize,
)


def run_suite(path, variant="default", seed=0):
    """Runs a benchmark suite and returns the report as a dict."""
    return json.loads(run_suite_json(str(path), variant, seed))


__all__ = [
    "Error",
    "css_normalize",
    "css_select",
    "regex_match",
    "regex_normalize",
    "run_suite",
    "select_qa_pairs",
    "synthesize",
]
