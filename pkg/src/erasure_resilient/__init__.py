"""Property testers under online-erasure and online-corruption oracles."""

from .core import (ERASED, BooleanFunction, Point, SequenceFunction, Transcript, eval_point,
                   load_function, save_function)
from .oracle import (BudgetExceeded, OracleMode, OracleSession, Witness, inspect, open_session)
from .adversaries import STRATEGIES, Strategy, make_strategy
from .testers import TESTERS, Decision, Verdict
from .harness import ExperimentConfig, estimate, run_trial
from .game import play
from .kernels import BACKEND

__all__ = [
    "ERASED", "BooleanFunction", "Point", "SequenceFunction", "Transcript", "eval_point",
    "load_function", "save_function", "BudgetExceeded", "OracleMode", "OracleSession", "Witness",
    "inspect", "open_session", "STRATEGIES", "Strategy", "make_strategy", "TESTERS", "Decision",
    "Verdict", "ExperimentConfig", "estimate", "run_trial", "play", "BACKEND",
]
