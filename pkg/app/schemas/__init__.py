# app/schemas/__init__.py
# Only schemas without model imports are re-exported here; the graph model
# imports the report schemas through this package.
from .report import (
    Violation,
    ValidationReport,
    DecompositionReport,
    EquivalenceReport,
)
from .graph import GraphFile, MuFile, PhiFile
from .state import AmplitudeEntry, InitialState

__all__ = [
    'Violation',
    'ValidationReport',
    'DecompositionReport',
    'EquivalenceReport',
    'GraphFile',
    'MuFile',
    'PhiFile',
    'AmplitudeEntry',
    'InitialState',
]
