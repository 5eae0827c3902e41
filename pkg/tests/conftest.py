"""
Pytest configuration and fixtures for Quan Arena tests.

This module provides common fixtures for unit and integration tests:
temporary directories, run configuration files, crafted game states and a
scripted stand-in for chat-completions endpoints.
"""

import json
import logging
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Generator, List, Optional, Sequence, Tuple, Union

import pytest

from quan_arena.agent import AgentKind, AgentSpec, TransportError
from quan_arena.arena import GameLog, MatchConfig, run_game
from quan_arena.config.providers import LlmAgentConfig, builtin_persona
from quan_arena.engine import (
    BoardState,
    CaptureLedger,
    GameState,
    Player,
    RuleConfig,
)
from quan_arena.utils.logging import clear_secrets, configure_logging, set_correlation_id

LLM_ENV_VARS = (
    "LLM_ENDPOINT_URL",
    "LLM_MODEL",
    "LLM_TEMPERATURE",
    "LLM_MAX_RETRIES",
    "LLM_REQUEST_TIMEOUT",
    "LLM_PERSONA",
    "LLM_API_KEY_ENV",
    "LLM_TRANSPORT_RETRIES",
    "LLM_API_KEY",
)


class ScriptedChat:
    """
    Chat backend that answers from a script instead of a network endpoint.

    replies is either a list consumed in order (the last reply repeats once
    the list runs out) or a callable receiving the prompt text.
    """

    def __init__(self, replies: Union[Sequence[str], Callable[[str], str]]) -> None:
        self.replies = replies
        self.prompts: List[str] = []

    @property
    def calls(self) -> int:
        return len(self.prompts)

    def complete(self, messages: List[Dict[str, str]]) -> str:
        prompt = messages[-1]["content"]
        self.prompts.append(prompt)
        if callable(self.replies):
            return self.replies(prompt)
        index = min(len(self.prompts) - 1, len(self.replies) - 1)
        return self.replies[index]


def answer(position: int, direction: str = "LTR", reason: str = "Keeps my row loaded.") -> str:
    """A well-formed model answer for a mover-relative position."""
    block = json.dumps({"reason": reason, "position": position, "direction": direction})
    return f"I looked at the board carefully.\n{block}"


def build_state(
    peasants: Sequence[int],
    mandarins: Optional[Sequence[bool]] = None,
    ledger_a: Tuple[int, int] = (0, 0),
    ledger_b: Optional[Tuple[int, int]] = None,
    player: Player = Player.A,
    turn: int = 1,
    config: Optional[RuleConfig] = None,
) -> GameState:
    """
    Assemble a GameState from vectors.

    mandarins defaults to a Mandarin in both Quan pits. When ledger_b is not
    given, B's ledger holds whatever tokens the board and A's ledger do not,
    so the state always conserves 50 peasants and 2 Mandarins.
    """
    if mandarins is None:
        mandarins = [index in (0, 6) for index in range(12)]
    if ledger_b is None:
        ledger_b = (
            50 - sum(peasants) - ledger_a[0],
            2 - sum(1 for flag in mandarins if flag) - ledger_a[1],
        )
    return GameState(
        board=BoardState.from_vectors(peasants, mandarins),
        captured=(CaptureLedger(*ledger_a), CaptureLedger(*ledger_b)),
        current_player=player,
        turn_number=turn,
        config=config or RuleConfig(),
    )


@pytest.fixture(autouse=True)
def clean_llm_environment(monkeypatch: pytest.MonkeyPatch) -> Generator[None, None, None]:
    """Keep host LLM settings and registered secrets out of every test."""
    for name in LLM_ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    yield
    clear_secrets()


@pytest.fixture(scope="function")
def temp_dir() -> Generator[Path, None, None]:
    """
    Create a temporary directory for test files.

    Returns:
        Path to a temporary directory that will be cleaned up after the test.
    """
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture(scope="function")
def temp_config_file(temp_dir: Path) -> Path:
    """Path for a run configuration file inside temp_dir."""
    return temp_dir / "quan_arena.json"


@pytest.fixture(scope="function")
def valid_run_config(temp_dir: Path) -> Dict[str, Any]:
    """
    Return a valid run configuration with scripted agents only.

    Returns:
        Dictionary containing a valid run configuration.
    """
    return {
        "rules": {"max_rounds": 25, "relay_enabled": True},
        "agents": {
            "greedy": {"kind": "Greedy"},
            "random": {"kind": "Random", "seed": 7},
            "search": {"kind": "Search", "depth": 2},
        },
        "match": {
            "agent_a": "greedy",
            "agent_b": "random",
            "games": 4,
            "base_seed": 42,
            "swap_sides": True,
        },
        "output_dir": str(temp_dir / "runs"),
        "workers": 1,
    }


@pytest.fixture(scope="function")
def invalid_run_config() -> Dict[str, Any]:
    """
    Return an invalid run configuration.

    Returns:
        Dictionary whose match names an agent that is not configured.
    """
    return {
        "agents": {"greedy": {"kind": "Greedy"}},
        "match": {"agent_a": "greedy", "agent_b": "missing"},
    }


@pytest.fixture(scope="function")
def run_config_file(temp_config_file: Path, valid_run_config: Dict[str, Any]) -> Path:
    """Write valid_run_config to disk and return its path."""
    with open(temp_config_file, "w") as f:
        json.dump(valid_run_config, f)
    return temp_config_file


@pytest.fixture(scope="function")
def invalid_run_config_file(
    temp_config_file: Path, invalid_run_config: Dict[str, Any]
) -> Path:
    """Write invalid_run_config to disk and return its path."""
    with open(temp_config_file, "w") as f:
        json.dump(invalid_run_config, f)
    return temp_config_file


@pytest.fixture(scope="function")
def fixtures_dir() -> Path:
    """Directory holding the static JSON fixtures."""
    return Path(__file__).parent / "fixtures"


@pytest.fixture(scope="function")
def llm_config() -> LlmAgentConfig:
    """Endpoint settings pointing at a local server that tests never reach."""
    return LlmAgentConfig(
        endpoint_url="http://localhost:8000/v1",
        model_name="test-model",
        temperature=0.0,
        max_retries=2,
        persona=builtin_persona("Balanced"),
    )


@pytest.fixture(scope="function")
def greedy_spec() -> AgentSpec:
    return AgentSpec(kind=AgentKind.GREEDY, name="greedy")


@pytest.fixture(scope="function")
def random_spec() -> AgentSpec:
    return AgentSpec(kind=AgentKind.RANDOM, name="random", seed=7)


@pytest.fixture(scope="function")
def scripted_match(greedy_spec: AgentSpec, random_spec: AgentSpec) -> MatchConfig:
    """Greedy against Random, four games, alternating sides."""
    return MatchConfig(
        agent_a=greedy_spec,
        agent_b=random_spec,
        rule_config=RuleConfig(),
        games=4,
        base_seed=42,
        swap_sides=True,
    )


@pytest.fixture(scope="function")
def configured_logging() -> Generator[None, None, None]:
    """
    Configure logging for tests.

    Sets up logging with a test correlation ID and returns to default
    configuration after the test.
    """
    configure_logging(level="DEBUG")
    set_correlation_id("test-correlation-id")

    yield

    root_logger = logging.getLogger()
    root_logger.handlers.clear()


def outage_after(replies: Sequence[str]) -> ScriptedChat:
    """Chat backend that gives the scripted replies, then fails every request."""
    script = list(replies)

    def reply(prompt: str) -> str:
        if script:
            return script.pop(0)
        raise TransportError("APIConnectionError: connection refused")

    return ScriptedChat(reply)


@pytest.fixture(scope="function")
def one_move_log(llm_config: LlmAgentConfig, greedy_spec: AgentSpec) -> GameLog:
    """
    An aborted two-turn game.

    The LLM agent opens with pit 5 LTR, Greedy answers, then the endpoint
    goes away before the LLM's second move.
    """
    config = MatchConfig(
        agent_a=AgentSpec(kind=AgentKind.LLM, name="llm", llm=llm_config),
        agent_b=greedy_spec,
        games=1,
        base_seed=0,
    )
    chat = outage_after([answer(5, "LTR", "Open the right side and keep my row full.")])
    return run_game(config, 0, sessions={"llm": chat})
