"""
Unit tests for agent specifications and the scripted agents.
"""

import random
from dataclasses import replace
from typing import List

import pytest

from quan_arena.agent import (
    AgentDecision,
    AgentKind,
    AgentSpec,
    DecisionBudgetExceededError,
    GreedyAgent,
    InvalidAgentSpecError,
    NoLegalActionsError,
    RandomAgent,
    SearchAgent,
    TurnSummary,
    create_agent,
    decide,
    derive_agent_seed,
)
from quan_arena.agent.llm import LlmAgent
from quan_arena.config.constants import DEFAULT_SEARCH_DEPTH, RANDOM_REASON
from quan_arena.engine import (
    Action,
    Direction,
    EndReason,
    GameState,
    Player,
    apply_move,
    final_scores,
    legal_actions,
    new_game,
)

from tests.conftest import ScriptedChat, build_state


def unique_capture_state() -> GameState:
    """Only pit 1 RTL captures anything: 4 peasants from pit 10."""
    peasants = [0, 1, 0, 0, 0, 0, 0, 5, 5, 5, 4, 0]
    return build_state(peasants)


def reachable_states(count: int, seed: int) -> List[GameState]:
    rng = random.Random(seed)
    states: List[GameState] = []
    while len(states) < count:
        state = new_game()
        while not state.is_finished and len(states) < count:
            states.append(state)
            state, _ = apply_move(state, rng.choice(legal_actions(state)))
    return states


class TestAgentSpec:
    """Test cases for AgentSpec parsing and validation."""

    def test_search_defaults_depth(self):
        spec = AgentSpec.from_dict({"kind": "Search"}, name="search")
        assert spec.depth == DEFAULT_SEARCH_DEPTH
        assert spec.name == "search"

    def test_name_field_wins_over_key(self):
        spec = AgentSpec.from_dict({"kind": "Greedy", "name": "g1"}, name="ignored")
        assert spec.name == "g1"

    @pytest.mark.parametrize(
        "data, message",
        [
            ({"kind": "Oracle"}, "Agent kind must be one of"),
            ({"kind": "Greedy", "depth": 2}, "depth is only valid for Search"),
            ({"kind": "Search", "depth": 0}, "Search depth must be a positive integer"),
            ({"kind": "Random", "seed": "seven"}, "seed must be an integer"),
            ({"kind": "Random", "llm": {}}, "llm is only valid for Llm agents"),
            ({"kind": "Random", "temperature": 1}, "Unknown agent settings: temperature"),
        ],
    )
    def test_invalid_specs(self, data, message):
        with pytest.raises(InvalidAgentSpecError, match=message):
            AgentSpec.from_dict(data, name="bad")

    def test_llm_spec_inherits_defaults(self, llm_config):
        spec = AgentSpec.from_dict(
            {"kind": "Llm", "llm": {"persona": "Defensive"}}, name="llm", llm_defaults=llm_config
        )
        assert spec.llm.endpoint_url == llm_config.endpoint_url
        assert spec.llm.persona.name == "Defensive"

    def test_llm_spec_rejects_inline_api_key(self, llm_config):
        with pytest.raises(InvalidAgentSpecError, match="API keys must not be written"):
            AgentSpec.from_dict(
                {"kind": "Llm", "llm": {"api_key": "sk-test"}}, name="llm", llm_defaults=llm_config
            )

    def test_to_dict_round_trip(self, llm_config):
        spec = AgentSpec(kind=AgentKind.LLM, name="llm", seed=3, llm=llm_config)
        data = spec.to_dict()
        assert "api_key" not in data["llm"]
        assert AgentSpec.from_dict(data) == spec

    def test_invalid_spec_is_also_a_value_error(self):
        with pytest.raises(ValueError):
            AgentSpec(kind=AgentKind.SEARCH, name="s", depth=-1).validate()


class TestSeeds:
    """Test cases for per-game agent seeds."""

    def test_sides_get_independent_seeds(self):
        assert derive_agent_seed(99, Player.A, 5) != derive_agent_seed(99, Player.B, 5)

    def test_missing_spec_seed_counts_as_zero(self):
        assert derive_agent_seed(99, Player.A, None) == derive_agent_seed(99, Player.A, 0)


class TestRandomAgent:
    """Test cases for RandomAgent."""

    def test_same_seed_same_choice(self):
        spec = AgentSpec(kind=AgentKind.RANDOM, name="r")
        for state in reachable_states(50, seed=1):
            first = RandomAgent(spec, seed=11).decide(state)
            second = RandomAgent(spec, seed=11).decide(state)
            assert first == second
            assert first.action in legal_actions(state)
            assert first.reason == RANDOM_REASON

    def test_different_seeds_diverge(self):
        spec = AgentSpec(kind=AgentKind.RANDOM, name="r")
        states = reachable_states(30, seed=2)
        first = [RandomAgent(spec, seed=1).decide(s).action for s in states]
        second = [RandomAgent(spec, seed=2).decide(s).action for s in states]
        assert first != second

    def test_scripted_decisions_take_one_attempt(self):
        decision = RandomAgent(AgentSpec(kind=AgentKind.RANDOM, name="r")).decide(new_game())
        assert decision.attempts == 1
        assert not decision.fallback_used


class TestGreedyAgent:
    """Test cases for GreedyAgent."""

    def test_picks_the_only_capture(self):
        state = unique_capture_state()
        points = {
            action: apply_move(state, action)[1].points(10) for action in legal_actions(state)
        }
        assert points == {Action(1, Direction.LTR): 0, Action(1, Direction.RTL): 4}

        decision = GreedyAgent(AgentSpec(kind=AgentKind.GREEDY, name="g")).decide(state)
        assert decision.action == Action(1, Direction.RTL)
        assert decision.reason == "greedy: pit 1 RTL captures 4 points now"

    def test_ties_go_to_first_canonical_action(self):
        state = build_state([0, 0, 0, 1, 0, 0, 0, 5, 5, 5, 5, 5])
        decision = GreedyAgent(AgentSpec(kind=AgentKind.GREEDY, name="g")).decide(state)
        assert decision.action == Action(3, Direction.LTR)

    def test_choice_is_never_beaten(self):
        agent = GreedyAgent(AgentSpec(kind=AgentKind.GREEDY, name="g"))
        for state in reachable_states(200, seed=5):
            chosen = agent.decide(state).action
            best = max(apply_move(state, a)[1].points(10) for a in legal_actions(state))
            assert apply_move(state, chosen)[1].points(10) == best


class TestSearchAgent:
    """Test cases for SearchAgent."""

    def test_depth_one_matches_greedy(self):
        greedy = GreedyAgent(AgentSpec(kind=AgentKind.GREEDY, name="g"))
        search = SearchAgent(AgentSpec(kind=AgentKind.SEARCH, name="s", depth=1))
        mid_game = [
            state
            for state in reachable_states(2_000, seed=9)
            if not any(apply_move(state, action)[0].is_finished for action in legal_actions(state))
        ][:1_000]
        assert len(mid_game) == 1_000
        for state in mid_game:
            assert search.decide(state).action == greedy.decide(state).action

    def test_finished_positions_scored_with_sweep(self):
        state = replace(
            build_state([0, 0, 0, 0, 0, 0, 0, 9, 9, 9, 9, 9], ledger_a=(3, 0)),
            end_reason=EndReason.NO_LEGAL_MOVES,
        )
        scores = final_scores(state)
        assert scores == {Player.A: 13, Player.B: 57}
        assert SearchAgent._evaluate(state) == -44

    def test_deeper_search_returns_legal_action(self):
        search = SearchAgent(AgentSpec(kind=AgentKind.SEARCH, name="s", depth=3))
        state = unique_capture_state()
        decision = search.decide(state)
        assert decision.action in legal_actions(state)
        assert decision.reason.startswith("search depth 3: ")

    def test_node_budget(self):
        search = SearchAgent(
            AgentSpec(kind=AgentKind.SEARCH, name="s", depth=3), node_budget=5
        )
        with pytest.raises(DecisionBudgetExceededError, match="budget of 5"):
            search.decide(new_game())


class TestAgentBase:
    """Test cases shared by every agent."""

    def test_finished_game(self, greedy_spec):
        state = new_game()
        finished = GameState(
            board=state.board,
            captured=state.captured,
            current_player=state.current_player,
            turn_number=state.turn_number,
            config=state.config,
            end_reason=EndReason.ROUND_LIMIT,
        )
        with pytest.raises(NoLegalActionsError):
            decide(greedy_spec, finished)

    def test_no_legal_actions(self, greedy_spec):
        state = build_state([2, 0, 0, 0, 0, 0, 0, 9, 9, 9, 9, 9], ledger_a=(3, 0))
        with pytest.raises(NoLegalActionsError):
            decide(greedy_spec, state)

    def test_create_agent_by_kind(self, llm_config):
        assert isinstance(create_agent(AgentSpec(AgentKind.RANDOM, "r")), RandomAgent)
        assert isinstance(create_agent(AgentSpec(AgentKind.GREEDY, "g")), GreedyAgent)
        assert isinstance(create_agent(AgentSpec(AgentKind.SEARCH, "s", depth=2)), SearchAgent)
        agent = create_agent(
            AgentSpec(AgentKind.LLM, "l", llm=llm_config), chat_session=ScriptedChat(["{}"])
        )
        assert isinstance(agent, LlmAgent)

    def test_decision_equality_ignores_exchanges(self):
        action = Action(1, Direction.LTR)
        assert AgentDecision("x", action) == AgentDecision("x", action, exchanges=())


class TestTurnSummary:
    """Test cases for the previous-turn summary shown to LLM agents."""

    def test_position_is_relative_to_mover(self):
        summary = TurnSummary(Player.B, Action(9, Direction.RTL), "Build up pit 9.", 3)
        assert summary.position == 3
        assert summary.render() == (
            "Player B scattered position 3 (RTL) and captured 3 points. "
            "Their reasoning: Build up pit 9."
        )
