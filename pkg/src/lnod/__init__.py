"""Workbench for an intuitionistic tense logic with four split negations:
formulas, Kripke model checking, countermodel search, complex algebras and a
display-style sequent calculus."""

from .syntax import parse, to_text, subformulas
from .kripke import (KripkeModel, WorldSet, make_model, extension, satisfies,
                     valid_on_model, persistent, check_frame_conditions)
from .search import SearchConfig, enumerate_models, find_countermodel, probe_dne, validity_scan
from .algebra import build_complex_algebra, check_laws, dualizing_report, fixed_modes
from .calculus import parse_sequent, prove_bounded, check_derivation, soundness_check

__version__ = "0.1.0"
