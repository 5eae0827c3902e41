"""
Configuration Module

This module handles all configuration-related functionality for Quan Arena,
including constants, LLM endpoint settings and run configuration loading.
"""

from .constants import *
