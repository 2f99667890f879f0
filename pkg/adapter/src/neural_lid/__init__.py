"""Neural word-level ID/EN language identification behind the LID wire
protocol v1: a fine-tunable token classifier served over stdin/stdout."""

from .config import AdapterConfig
from .data import load_labeled_rows
from .finetune import finetune
from .serve import serve

__version__ = "0.1.0"
