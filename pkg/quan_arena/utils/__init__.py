"""
Utilities Module

This module contains utility functions and classes used throughout
Quan Arena, chiefly logging configuration.
"""

from .logging import (
    CONVERSATION_LOGGER_NAME,
    configure_logging,
    correlation_scope,
    set_correlation_id,
    get_correlation_id,
    generate_correlation_id,
    log_with_context,
    log_error_with_context,
    log_performance,
    register_secret,
    clear_secrets,
    redact,
    setup_logging,
    CorrelationFilter,
    SecretRedactionFilter,
    StructuredFormatter,
)

__all__ = [
    "CONVERSATION_LOGGER_NAME",
    "configure_logging",
    "correlation_scope",
    "set_correlation_id",
    "get_correlation_id",
    "generate_correlation_id",
    "log_with_context",
    "log_error_with_context",
    "log_performance",
    "register_secret",
    "clear_secrets",
    "redact",
    "setup_logging",
    "CorrelationFilter",
    "SecretRedactionFilter",
    "StructuredFormatter",
]
