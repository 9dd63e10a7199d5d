"""Exact verification engine and protocol simulator for MUB line-state
geometry in odd prime dimensions."""

__version__ = "0.1.0"
