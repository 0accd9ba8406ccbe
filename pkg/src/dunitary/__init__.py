"""Exact synthesis and word rewriting for unitaries over D[omega]."""

from __future__ import annotations

from ._backend import BACKEND
from .linalg import GenMatrix, Generator, Level, clifford_t_gates, is_unitary, level
from .rewrite import decide_equiv, main_lemma_step, normal_form, normalize
from .ring import CycInt, RingElem
from .rules import RULES, Derivation, RuleInstance, apply_rule, derived_rules, rule_table
from .synth import synthesize
from .words import evaluate, format_word, parse_word, to_basic

__all__ = [
    "BACKEND",
    "CycInt",
    "RingElem",
    "GenMatrix",
    "Generator",
    "Level",
    "clifford_t_gates",
    "is_unitary",
    "level",
    "synthesize",
    "parse_word",
    "format_word",
    "evaluate",
    "to_basic",
    "RULES",
    "rule_table",
    "derived_rules",
    "apply_rule",
    "RuleInstance",
    "Derivation",
    "normalize",
    "normal_form",
    "decide_equiv",
    "main_lemma_step",
]
