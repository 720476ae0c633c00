"""Visual program simulation for a small Java subset.

Run a program, inspect each step's memory as a box-and-arrow diagram, and
grade student diagrams written in VPS-D.
"""

import json

from ._vps import (
    DEFAULT_MAX_STEPS,
    AnswerError,
    CompileError,
    canonical_vpsd,
    check,
    render,
    step_vpsd,
)
from . import _vps

__all__ = [
    "DEFAULT_MAX_STEPS",
    "AnswerError",
    "CompileError",
    "ast",
    "canonical_vpsd",
    "check",
    "grade",
    "render",
    "step_vpsd",
    "trace",
    "trace_json",
]


def ast(source):
    """Syntax tree of a valid program as a dict. Raises CompileError."""
    return json.loads(_vps.ast_json(source))


def trace_json(source, max_steps=DEFAULT_MAX_STEPS):
    """Trace document text. Raises CompileError."""
    return _vps.trace_json(source, max_steps)


def trace(source, max_steps=DEFAULT_MAX_STEPS):
    """Trace of a program as a dict (version, program, output, events)."""
    return json.loads(_vps.trace_json(source, max_steps))


def grade(source, answer, step="last", max_steps=DEFAULT_MAX_STEPS):
    """Feedback report dict for a VPS-D answer against one step.

    Raises CompileError for a bad program and AnswerError for a malformed
    answer.
    """
    return json.loads(_vps.grade(source, answer, step, max_steps))
