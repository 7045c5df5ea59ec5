"""Over- and under-represented substrings of a text, scored over its Burrows-Wheeler index."""

from .engine import AnalysisResult, analyze
from .kernel import analyze_fast
from .report import render_report
from .scoring import MarkovModel, ScoreRecord, Thresholds, estimate_model
from .text_index import BwtIndex, Text, build_index, ingest

__all__ = [
    "AnalysisResult",
    "BwtIndex",
    "MarkovModel",
    "ScoreRecord",
    "Text",
    "Thresholds",
    "analyze",
    "analyze_fast",
    "build_index",
    "estimate_model",
    "ingest",
    "render_report",
]
