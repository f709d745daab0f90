"""Sentence boundaries, commas and written-form restoration for Polish ASR output."""

__version__ = "0.1.0"
