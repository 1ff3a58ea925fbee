"""Toolkit for highlighting key answer parts in synthesized speech and
evaluating the effect of those prosody modifications with crowd
judgments."""

__version__ = "0.1.0"
