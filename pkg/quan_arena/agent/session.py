"""
Chat Session Management for LLM agents.

This module wraps an OpenAI-compatible chat-completions client. Every
request passes through a process-wide bounded semaphore so the number of
requests in flight stays capped across all concurrently running games.
"""

import logging
import threading
import time
from typing import Dict, List, Optional, Protocol

import openai

from ..config.constants import DEFAULT_MAX_IN_FLIGHT
from ..config.providers import LlmAgentConfig
from ..utils.logging import redact, register_secret
from .errors import TransportError

logger = logging.getLogger(__name__)

Message = Dict[str, str]

_in_flight_lock = threading.Lock()
_in_flight = threading.BoundedSemaphore(DEFAULT_MAX_IN_FLIGHT)


def configure_in_flight_limit(limit: int) -> None:
    """
    Set the global cap on concurrent chat-completions requests.

    Args:
        limit: Maximum number of requests in flight at once

    Raises:
        ValueError: If limit is below 1
    """
    global _in_flight
    if limit < 1:
        raise ValueError(f"In-flight limit must be at least 1, got {limit}")
    with _in_flight_lock:
        _in_flight = threading.BoundedSemaphore(limit)
    logger.debug(f"LLM in-flight request limit set to {limit}")


def _semaphore() -> threading.BoundedSemaphore:
    with _in_flight_lock:
        return _in_flight


class ChatBackend(Protocol):
    """Anything that can answer a list of chat messages with text."""

    def complete(self, messages: List[Message]) -> str: ...


class ChatSession:
    """
    Chat-completions client bound to one endpoint and model.

    Transient transport failures are retried by the OpenAI client with
    exponential backoff (transport_retries times); whatever still fails is
    raised as TransportError.
    """

    def __init__(self, config: LlmAgentConfig, client: Optional[openai.OpenAI] = None) -> None:
        """
        Initialize the session.

        Args:
            config: Endpoint configuration
            client: Pre-built client; created from config if None
        """
        self.config = config
        api_key = config.api_key()
        if api_key:
            register_secret(api_key)
        else:
            logger.warning(
                f"Environment variable {config.api_key_env_var} is not set; "
                f"sending requests to {config.endpoint_url} without a key"
            )
        # Local OpenAI-compatible servers accept any key, but the client requires one
        self._client = client or openai.OpenAI(
            base_url=config.endpoint_url,
            api_key=api_key or "EMPTY",
            timeout=config.request_timeout,
            max_retries=config.transport_retries,
        )
        logger.info(
            f"ChatSession initialized for model {config.model_name} at {config.endpoint_url}"
        )

    def complete(self, messages: List[Message]) -> str:
        """
        Send one chat-completions request.

        Args:
            messages: Chat messages in wire format

        Returns:
            str: Content of the first choice ("" when the endpoint sent none)

        Raises:
            TransportError: If the endpoint is unreachable or answers with an error
        """
        kwargs = {"model": self.config.model_name, "messages": messages}
        if self.config.temperature is not None:
            kwargs["temperature"] = self.config.temperature

        started = time.perf_counter()
        with _semaphore():
            try:
                response = self._client.chat.completions.create(**kwargs)
            except openai.OpenAIError as e:
                logger.error(f"Chat request to {self.config.model_name} failed: {e}")
                raise TransportError(redact(f"{type(e).__name__}: {e}")) from e

        elapsed_ms = (time.perf_counter() - started) * 1000
        logger.debug(f"Chat request to {self.config.model_name} took {elapsed_ms:.0f} ms")
        if not response.choices:
            return ""
        return response.choices[0].message.content or ""
