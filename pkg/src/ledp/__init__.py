"""
Local-edge-DP runtime package initialization.
"""
from .transcript import Transcript, TranscriptEntry
from .runtime import (
    NodeView,
    BulletinBoard,
    LocalRandomizer,
    Curator,
    ProtocolRuntime,
    ReplayRuntime,
    ProtocolRun,
    run_protocol,
    replay,
)
from .randomizers import PeelCountRandomizer, MaskedDegreeRandomizer

__all__ = [
    'Transcript',
    'TranscriptEntry',
    'NodeView',
    'BulletinBoard',
    'LocalRandomizer',
    'Curator',
    'ProtocolRuntime',
    'ReplayRuntime',
    'ProtocolRun',
    'run_protocol',
    'replay',
    'PeelCountRandomizer',
    'MaskedDegreeRandomizer',
]
