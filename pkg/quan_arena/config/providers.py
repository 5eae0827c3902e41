"""
Provider Configuration for LLM-backed agents.

This module handles configuration of chat-completions endpoints used by LLM
agents and by the reasoning classifier: persona selection, endpoint and model
settings loaded from the environment, and creation of chat sessions.
"""

import logging
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Union

from .constants import (
    BUILTIN_PERSONAS,
    DEFAULT_API_KEY_ENV_VAR,
    DEFAULT_LLM_ENDPOINT_URL,
    DEFAULT_LLM_MODEL,
    DEFAULT_MAX_RETRIES,
    DEFAULT_PERSONA,
    DEFAULT_REQUEST_TIMEOUT,
    DEFAULT_TRANSPORT_RETRIES,
)

logger = logging.getLogger(__name__)


class ProviderConfigurationError(ValueError):
    """Raised when an LLM endpoint or persona configuration is invalid."""

    pass


@dataclass(frozen=True)
class Persona:
    """A natural-language behavioral instruction inserted into the prompt."""

    name: str
    instruction: str

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise ProviderConfigurationError("Persona name must not be empty")
        if not self.instruction or not self.instruction.strip():
            raise ProviderConfigurationError(f"Persona '{self.name}' has an empty instruction")

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.name, "instruction": self.instruction}


def builtin_persona(name: str) -> Persona:
    """
    Look up one of the personas shipped with the project.

    Raises:
        ProviderConfigurationError: If no built-in persona has that name
    """
    try:
        return Persona(name=name, instruction=BUILTIN_PERSONAS[name])
    except KeyError:
        raise ProviderConfigurationError(
            f"Unknown persona '{name}'. Built-in personas: {', '.join(sorted(BUILTIN_PERSONAS))}"
        ) from None


def resolve_persona(value: Union[str, Dict[str, Any], Persona]) -> Persona:
    """Accept a built-in persona name, an inline {name, instruction} object or a Persona."""
    if isinstance(value, Persona):
        return value
    if isinstance(value, str):
        return builtin_persona(value)
    if isinstance(value, dict):
        name = value.get("name")
        instruction = value.get("instruction")
        if not isinstance(name, str):
            raise ProviderConfigurationError("Persona 'name' must be a string")
        if instruction is None:
            return builtin_persona(name)
        if not isinstance(instruction, str):
            raise ProviderConfigurationError(f"Persona '{name}' 'instruction' must be a string")
        return Persona(name=name, instruction=instruction)
    raise ProviderConfigurationError(
        f"Persona must be a name or an object, got {type(value).__name__}"
    )


@dataclass(frozen=True)
class LlmAgentConfig:
    """
    Configuration for a chat-completions endpoint.

    The API key itself is never stored here: only the name of the environment
    variable that holds it, so the config can be written into logs as is.
    """

    endpoint_url: str = DEFAULT_LLM_ENDPOINT_URL
    model_name: str = DEFAULT_LLM_MODEL
    # None leaves sampling to the endpoint's defaults
    temperature: Optional[float] = None
    max_retries: int = DEFAULT_MAX_RETRIES
    request_timeout: float = DEFAULT_REQUEST_TIMEOUT
    persona: Persona = field(default_factory=lambda: builtin_persona(DEFAULT_PERSONA))
    api_key_env_var: str = DEFAULT_API_KEY_ENV_VAR
    transport_retries: int = DEFAULT_TRANSPORT_RETRIES

    def validate(self) -> None:
        """
        Check field types and ranges.

        Raises:
            ProviderConfigurationError: If a field is out of range
        """
        if not isinstance(self.endpoint_url, str) or not self.endpoint_url:
            raise ProviderConfigurationError("'endpoint_url' must be a non-empty string")
        if not isinstance(self.model_name, str) or not self.model_name:
            raise ProviderConfigurationError("'model_name' must be a non-empty string")
        if self.temperature is not None and (
            isinstance(self.temperature, bool)
            or not isinstance(self.temperature, (int, float))
            or self.temperature < 0
        ):
            raise ProviderConfigurationError("'temperature' must be a number >= 0")
        for name in ("max_retries", "transport_retries"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ProviderConfigurationError(f"'{name}' must be an integer >= 0")
        if (
            isinstance(self.request_timeout, bool)
            or not isinstance(self.request_timeout, (int, float))
            or self.request_timeout <= 0
        ):
            raise ProviderConfigurationError("'request_timeout' must be a positive number")
        if not isinstance(self.api_key_env_var, str) or not self.api_key_env_var:
            raise ProviderConfigurationError("'api_key_env_var' must be a non-empty string")

    def api_key(self) -> Optional[str]:
        """Read the API key from the configured environment variable."""
        return os.getenv(self.api_key_env_var)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "endpoint_url": self.endpoint_url,
            "model_name": self.model_name,
            "temperature": self.temperature,
            "max_retries": self.max_retries,
            "request_timeout": self.request_timeout,
            "persona": self.persona.to_dict(),
            "api_key_env_var": self.api_key_env_var,
            "transport_retries": self.transport_retries,
        }

    @classmethod
    def from_dict(
        cls, data: Dict[str, Any], base: Optional["LlmAgentConfig"] = None
    ) -> "LlmAgentConfig":
        """
        Build a config from a JSON object, filling missing fields from base.

        Args:
            data: Mapping with any subset of the dataclass fields
            base: Defaults for missing fields; the class defaults if None

        Raises:
            ProviderConfigurationError: If keys are unknown or values invalid
        """
        if not isinstance(data, dict):
            raise ProviderConfigurationError("LLM configuration must be an object")
        if "api_key" in data:
            raise ProviderConfigurationError(
                "API keys must not be written into config files; "
                "set 'api_key_env_var' to the name of an environment variable instead"
            )
        base = base or cls()
        known = set(base.to_dict())
        unknown = sorted(set(data) - known)
        if unknown:
            raise ProviderConfigurationError(f"Unknown LLM settings: {', '.join(unknown)}")
        values = dict(data)
        if "persona" in values:
            values["persona"] = resolve_persona(values["persona"])
        config = replace(base, **values)
        config.validate()
        return config


class ProviderConfigLoader:
    """Loads LLM endpoint configuration from environment variables and defaults."""

    @staticmethod
    def load_llm_config() -> LlmAgentConfig:
        """
        Load LLM configuration from environment variables.

        Returns:
            LlmAgentConfig: Loaded configuration

        Raises:
            ProviderConfigurationError: If a variable holds an unusable value
        """
        try:
            temperature = os.getenv("LLM_TEMPERATURE")
            config = LlmAgentConfig(
                endpoint_url=os.getenv("LLM_ENDPOINT_URL", DEFAULT_LLM_ENDPOINT_URL),
                model_name=os.getenv("LLM_MODEL", DEFAULT_LLM_MODEL),
                temperature=float(temperature) if temperature else None,
                max_retries=int(os.getenv("LLM_MAX_RETRIES", str(DEFAULT_MAX_RETRIES))),
                request_timeout=float(
                    os.getenv("LLM_REQUEST_TIMEOUT", str(DEFAULT_REQUEST_TIMEOUT))
                ),
                persona=builtin_persona(os.getenv("LLM_PERSONA", DEFAULT_PERSONA)),
                api_key_env_var=os.getenv("LLM_API_KEY_ENV", DEFAULT_API_KEY_ENV_VAR),
                transport_retries=int(
                    os.getenv("LLM_TRANSPORT_RETRIES", str(DEFAULT_TRANSPORT_RETRIES))
                ),
            )
        except ValueError as e:
            if isinstance(e, ProviderConfigurationError):
                raise
            raise ProviderConfigurationError(f"Invalid LLM environment setting: {e}") from e

        config.validate()
        logger.info(
            f"Loaded LLM config: endpoint={config.endpoint_url}, model={config.model_name}, "
            f"persona={config.persona.name}"
        )
        return config


class ProviderFactory:
    """Factory class for creating chat sessions from configuration."""

    @staticmethod
    def create_chat_session(config: LlmAgentConfig) -> Any:
        """
        Create a chat session for an endpoint.

        Args:
            config: Endpoint configuration

        Returns:
            ChatSession: Session bound to the endpoint

        Raises:
            Exception: If the client cannot be created
        """
        from ..agent.session import ChatSession

        try:
            logger.debug(f"Creating chat session for model: {config.model_name}")
            return ChatSession(config)
        except Exception as e:
            logger.error(f"Failed to create chat session for {config.model_name}: {e}")
            raise
