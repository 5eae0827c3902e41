"""
Integration tests for Quan Arena.

These tests run an LLM agent against a scripted opponent through the real
chat session (with the OpenAI client patched out), then push the logs
through replay, analysis and classification.
"""

import itertools
import json
import logging
import re
from io import StringIO
from types import SimpleNamespace
from unittest.mock import patch

import pytest

from quan_arena.agent import AgentKind, AgentSpec
from quan_arena.analysis import build_report, classify_reasoning, emit_report, load_logs
from quan_arena.arena import MatchConfig, replay, run_game, run_tournament
from quan_arena.config.providers import LlmAgentConfig, builtin_persona
from quan_arena.engine import EndReason, Player, apply_move, legal_actions
from quan_arena.utils.logging import CONVERSATION_LOGGER_NAME, configure_logging

from tests.conftest import ScriptedChat, answer, build_state

SECRET = "sk-integration-9f8e7d6c5b4a"


def completion(text):
    return SimpleNamespace(choices=[SimpleNamespace(message=SimpleNamespace(content=text))])


def cycling_model():
    """Answers pit 1..5 in turn; illegal picks exercise the retry and fallback paths."""
    positions = itertools.cycle(range(1, 6))

    def create(**kwargs):
        position = next(positions)
        return completion(answer(position, "RTL" if position % 2 else "LTR", f"Try pit {position}."))

    return create


PIT_LINE = re.compile(r"^pit=(\d+) .* peasants=(\d+) mandarin=(yes|no)$", re.MULTILINE)
LEDGER_LINE = re.compile(r"^captured player=([AB]) peasants=(\d+) mandarins=(\d+) ", re.MULTILINE)


def state_from_prompt(prompt):
    """Rebuild the position from the key=value board lines of a decision prompt."""
    pits = sorted(
        (int(index), int(peasants), flag == "yes") for index, peasants, flag in PIT_LINE.findall(prompt)
    )
    ledgers = {
        side: (int(peasants), int(mandarins)) for side, peasants, mandarins in LEDGER_LINE.findall(prompt)
    }
    return build_state(
        [peasants for _, peasants, _ in pits],
        [flag for _, _, flag in pits],
        ledger_a=ledgers["A"],
        ledger_b=ledgers["B"],
        player=Player(re.search(r"^current_player=([AB])$", prompt, re.MULTILINE).group(1)),
        turn=int(re.search(r"^turn=(\d+)$", prompt, re.MULTILINE).group(1)),
    )


def still_running(state):
    return not state.is_finished or state.end_reason is EndReason.ROUND_LIMIT


def patient_model(prompt):
    """Reads the board and plays the quietest move that keeps the game going for two more plies."""
    state = state_from_prompt(prompt)
    candidates = legal_actions(state)
    viable = []
    for action in candidates:
        child, _ = apply_move(state, action)
        if child.is_finished:
            if still_running(child):
                viable.append(action)
            continue
        if any(still_running(apply_move(child, reply)[0]) for reply in legal_actions(child)):
            viable.append(action)
    action = min(viable or candidates, key=lambda a: apply_move(state, a)[1].points(10))
    position = state.current_player.pits.index(action.pit) + 1
    return answer(position, action.direction.value, f"Pit {position} keeps the board quiet.")


@pytest.fixture
def log_stream():
    stream = StringIO()
    configure_logging(level="DEBUG", stream=stream)
    yield stream
    logging.getLogger().handlers.clear()
    logging.getLogger(CONVERSATION_LOGGER_NAME).handlers.clear()


@pytest.mark.integration
class TestEndToEnd:
    """Integration tests across engine, agents, arena and analysis."""

    @patch("quan_arena.agent.session.openai.OpenAI")
    def test_llm_tournament_to_report(self, mock_openai, greedy_spec, temp_dir, log_stream, monkeypatch):
        """Test a full LLM tournament, its replay and every report built from it."""
        monkeypatch.setenv("QUAN_IT_API_KEY", SECRET)
        mock_openai.return_value.chat.completions.create.side_effect = cycling_model()
        llm = LlmAgentConfig(
            endpoint_url="http://localhost:8000/v1",
            model_name="integration-model",
            temperature=0.0,
            max_retries=2,
            persona=builtin_persona("RiskTaker"),
            api_key_env_var="QUAN_IT_API_KEY",
        )
        config = MatchConfig(
            agent_a=AgentSpec(kind=AgentKind.LLM, name="llm", llm=llm),
            agent_b=greedy_spec,
            games=2,
            base_seed=11,
            swap_sides=True,
        )
        out = temp_dir / "run"

        summary = run_tournament(config, out, workers=2)

        assert summary.completed == 2
        assert summary.unverified == 0
        assert mock_openai.call_args.kwargs["api_key"] == SECRET
        assert mock_openai.call_args.kwargs["base_url"] == "http://localhost:8000/v1"

        logs = load_logs(out)
        for log in logs:
            assert replay(log).verified
            assert log.result.points is not None
            assert sum(log.result.points.values()) == 70
            assert all(turn.reason.strip() for turn in log.turns)
        llm_turns = [t for log in logs for t in log.turns if log.agent_name(t.mover) == "llm"]
        assert any(turn.exchanges for turn in llm_turns)

        labeled, reasoning = classify_reasoning(
            logs, llm, session=ScriptedChat(["LONG_TERM_STRATEGY"]), focal="llm"
        )
        report = build_report(logs, "llm", reasoning=reasoning)
        paths = emit_report(report, out / "analysis")

        assert report.rates.games == 2
        assert len(labeled) + reasoning.excluded_fallback == len(llm_turns)
        assert [path.name for path in paths][-1] == "reasoning_per_round.csv"

        assert SECRET not in log_stream.getvalue()
        for path in out.rglob("*"):
            if path.is_file():
                assert SECRET not in path.read_text(encoding="utf-8")
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert SECRET not in json.dumps(manifest)

    @pytest.mark.slow
    def test_full_length_llm_game(self, llm_config):
        """Test two board-reading mock models playing through to the round limit."""
        config = MatchConfig(
            agent_a=AgentSpec(kind=AgentKind.LLM, name="llm-a", llm=llm_config),
            agent_b=AgentSpec(kind=AgentKind.LLM, name="llm-b", llm=llm_config),
            games=1,
            base_seed=3,
        )
        sessions = {"llm-a": ScriptedChat(patient_model), "llm-b": ScriptedChat(patient_model)}

        log = run_game(config, 0, sessions)

        assert not log.aborted
        assert log.turns[-1].round_number == 25
        assert log.result.ending_round == 25
        assert log.result.end_reason is EndReason.ROUND_LIMIT
        assert all(turn.reason.strip() for turn in log.turns)
        assert not any(turn.fallback_used for turn in log.turns)
        assert sum(log.result.points.values()) == 70
        assert replay(log).verified
