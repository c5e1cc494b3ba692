"""Desk-scale workbench for Rapid Decay criteria on concrete groups."""

__version__ = "0.1.0"
