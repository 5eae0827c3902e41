"""
Quan Arena Package

A deterministic Ô Ăn Quan game environment with scripted and LLM-backed
agents, a tournament and replay harness, and an analytics pipeline that
turns game logs into win rates, phase scores, planning-depth distributions
and reasoning-type breakdowns.
"""

__version__ = "1.0.0"
__author__ = "Quan Arena Team"
