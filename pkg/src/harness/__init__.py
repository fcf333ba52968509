"""
Experiment harness package initialization.
"""
from .runner import (
    ALGORITHMS,
    RunSettings,
    plan_parameters,
    run_trial,
    run_trials,
    trial_seed,
    graph_kind,
    write_results,
    read_results,
    replay_transcript,
)
from .summary import summarize, format_summary, acceptance_bound

__all__ = [
    'ALGORITHMS',
    'RunSettings',
    'plan_parameters',
    'run_trial',
    'run_trials',
    'trial_seed',
    'graph_kind',
    'write_results',
    'read_results',
    'replay_transcript',
    'summarize',
    'format_summary',
    'acceptance_bound',
]
