"""
Run configuration loader.

This module handles loading and validation of the JSON run configuration:
rule toggles, named agent specifications, the match to play, an optional
reasoning classifier and output settings.
"""

import json
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional

from ..agent import AgentKind, AgentSpec, InvalidAgentSpecError
from ..arena import MatchConfig
from ..engine import InvalidConfigError, RuleConfig
from .constants import (
    DEFAULT_BASE_SEED,
    DEFAULT_GAMES,
    DEFAULT_MAX_IN_FLIGHT,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_RUN_CONFIG_PATH,
    DEFAULT_WORKERS,
)
from .providers import LlmAgentConfig, ProviderConfigLoader, ProviderConfigurationError

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = {
    "rules",
    "llm_defaults",
    "agents",
    "match",
    "classifier",
    "output_dir",
    "workers",
    "max_in_flight",
}
MATCH_KEYS = {"agent_a", "agent_b", "games", "base_seed", "swap_sides"}


class RunConfigurationError(Exception):
    """Raised when there's an error in the run configuration."""

    pass


@dataclass(frozen=True)
class RunConfig:
    """A fully validated experiment definition."""

    rule_config: RuleConfig
    agents: Dict[str, AgentSpec]
    match: MatchConfig
    classifier: Optional[LlmAgentConfig]
    output_dir: Path
    workers: int = DEFAULT_WORKERS
    max_in_flight: int = DEFAULT_MAX_IN_FLIGHT

    def with_overrides(
        self,
        seed: Optional[int] = None,
        games: Optional[int] = None,
        workers: Optional[int] = None,
        output_dir: Optional[str] = None,
    ) -> "RunConfig":
        """Apply command-line overrides."""
        match = self.match
        if seed is not None:
            match = replace(match, base_seed=seed)
        if games is not None:
            if games < 1:
                raise RunConfigurationError(f"games must be at least 1, got {games}")
            match = replace(match, games=games)
        if workers is not None and workers < 1:
            raise RunConfigurationError(f"workers must be at least 1, got {workers}")
        return replace(
            self,
            match=match,
            workers=workers if workers is not None else self.workers,
            output_dir=Path(output_dir) if output_dir is not None else self.output_dir,
        )


def _read_json(path: str) -> Any:
    if not os.path.exists(path):
        raise RunConfigurationError(f"Configuration file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise RunConfigurationError(f"Invalid JSON in configuration file {path}: {e}") from e
    except IOError as e:
        raise RunConfigurationError(f"Error reading configuration file {path}: {e}") from e


def _positive_int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise RunConfigurationError(f"'{name}' must be a positive integer, got {value!r}")
    return value


class RunConfigLoader:
    """
    Loads and validates a run configuration from a JSON file.

    Llm agents and the classifier start from the endpoint settings found in
    the environment (see ProviderConfigLoader), overridden by an optional
    "llm_defaults" object and then by each entry's own "llm" object.
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize the run configuration loader.

        Args:
            config_path: Path to the run configuration JSON file.
                        Defaults to DEFAULT_RUN_CONFIG_PATH if not provided.
        """
        self.config_path = config_path or DEFAULT_RUN_CONFIG_PATH

    def load(self) -> RunConfig:
        """
        Load and validate the run configuration.

        Returns:
            RunConfig: The validated configuration

        Raises:
            RunConfigurationError: If the file is missing, unreadable or invalid
        """
        config = _read_json(self.config_path)
        if not isinstance(config, dict):
            raise RunConfigurationError(
                f"Run configuration must be a JSON object, got {type(config).__name__}"
            )
        unknown = sorted(set(config) - TOP_LEVEL_KEYS)
        if unknown:
            raise RunConfigurationError(f"Unknown configuration keys: {', '.join(unknown)}")

        try:
            rule_config = RuleConfig.from_dict(config.get("rules", {}))
        except (InvalidConfigError, TypeError) as e:
            raise RunConfigurationError(f"Invalid 'rules': {e}") from e

        llm_defaults = self._llm_defaults(config)
        agents = self._agents(config.get("agents"), llm_defaults)
        match = self._match(config.get("match"), agents, rule_config)

        classifier = None
        if config.get("classifier") is not None:
            classifier = self._llm_config(config["classifier"], llm_defaults, "classifier")

        workers = _positive_int(config.get("workers", DEFAULT_WORKERS), "workers")
        max_in_flight = _positive_int(
            config.get("max_in_flight", DEFAULT_MAX_IN_FLIGHT), "max_in_flight"
        )
        output_dir = config.get("output_dir", DEFAULT_OUTPUT_DIR)
        if not isinstance(output_dir, str) or not output_dir:
            raise RunConfigurationError("'output_dir' must be a non-empty string")

        logger.info(
            f"Loaded run configuration from {self.config_path}: {len(agents)} agents, "
            f"match {match.matchup_id} x{match.games}"
        )
        return RunConfig(
            rule_config=rule_config,
            agents=agents,
            match=match,
            classifier=classifier,
            output_dir=Path(output_dir),
            workers=workers,
            max_in_flight=max_in_flight,
        )

    def _llm_defaults(self, config: Dict[str, Any]) -> LlmAgentConfig:
        try:
            base = ProviderConfigLoader.load_llm_config()
        except ProviderConfigurationError as e:
            raise RunConfigurationError(f"Invalid LLM environment: {e}") from e
        if "llm_defaults" not in config:
            return base
        return self._llm_config(config["llm_defaults"], base, "llm_defaults")

    @staticmethod
    def _llm_config(data: Any, base: LlmAgentConfig, where: str) -> LlmAgentConfig:
        try:
            return LlmAgentConfig.from_dict(data, base=base)
        except ProviderConfigurationError as e:
            raise RunConfigurationError(f"Invalid '{where}': {e}") from e

    @staticmethod
    def _agents(data: Any, llm_defaults: LlmAgentConfig) -> Dict[str, AgentSpec]:
        if not isinstance(data, dict) or not data:
            raise RunConfigurationError("'agents' must be a non-empty object of named agents")
        agents = {}
        for name, entry in data.items():
            if isinstance(entry, dict) and "name" in entry and entry["name"] != name:
                raise RunConfigurationError(
                    f"Agent '{name}' has a conflicting name field '{entry['name']}'"
                )
            try:
                spec = AgentSpec.from_dict(entry, name=name, llm_defaults=llm_defaults)
            except InvalidAgentSpecError as e:
                raise RunConfigurationError(f"Invalid agent '{name}': {e}") from e
            if spec.kind is AgentKind.LLM and not os.getenv(spec.llm.api_key_env_var):
                logger.warning(
                    f"Agent '{name}': environment variable {spec.llm.api_key_env_var} is not set"
                )
            agents[name] = spec
        return agents

    @staticmethod
    def _match(data: Any, agents: Dict[str, AgentSpec], rule_config: RuleConfig) -> MatchConfig:
        if not isinstance(data, dict):
            raise RunConfigurationError("'match' must be an object")
        unknown = sorted(set(data) - MATCH_KEYS)
        if unknown:
            raise RunConfigurationError(f"Unknown match settings: {', '.join(unknown)}")
        sides = []
        for key in ("agent_a", "agent_b"):
            name = data.get(key)
            if name not in agents:
                raise RunConfigurationError(
                    f"match.{key} must name a configured agent, got {name!r}"
                )
            sides.append(agents[name])
        swap_sides = data.get("swap_sides", False)
        if not isinstance(swap_sides, bool):
            raise RunConfigurationError("match.swap_sides must be a boolean")
        match = MatchConfig(
            agent_a=sides[0],
            agent_b=sides[1],
            rule_config=rule_config,
            games=_positive_int(data.get("games", DEFAULT_GAMES), "match.games"),
            base_seed=data.get("base_seed", DEFAULT_BASE_SEED),
            swap_sides=swap_sides,
        )
        try:
            match.validate()
        except ValueError as e:
            raise RunConfigurationError(f"Invalid 'match': {e}") from e
        return match


def load_classifier_config(path: str) -> LlmAgentConfig:
    """
    Load a standalone classifier endpoint configuration.

    Raises:
        RunConfigurationError: If the file is missing or invalid
    """
    data = _read_json(path)
    try:
        base = ProviderConfigLoader.load_llm_config()
        return LlmAgentConfig.from_dict(data, base=base)
    except ProviderConfigurationError as e:
        raise RunConfigurationError(f"Invalid classifier configuration {path}: {e}") from e
