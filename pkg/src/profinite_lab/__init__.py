"""Profinite topology on Z, a halting-driven open set, and lamplighter amalgams."""

from .depth import DepthRow, QuotientVerdict, depth_table, quotient_kill_shifts
from .halting_set import HaltingSet, coarse_halting_bound, t_seq
from .lamplighter import Amalgam, LampElement, eval_factor, parse_word
from .machines import Halted, MachineSpec, Registry, RunningAfter, halts_within, parse_machine, run_bounded
from .profinite import (
    BUDGET_EXHAUSTED,
    Progression,
    closed_ball,
    dist,
    norm,
    open_ball,
    progression_contains,
    progression_covered_by,
    progression_subset,
    theta,
)

__version__ = "0.1.0"
