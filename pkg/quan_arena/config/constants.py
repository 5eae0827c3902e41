"""
Configuration constants for Quan Arena.

This module contains all application constants including the board layout,
default rule toggles, agent and LLM endpoint settings, arena file naming
and analysis presentation parameters.
"""

# Board Layout
PIT_COUNT = 12
QUAN_PITS = (0, 6)
PLAYER_A_PITS = (1, 2, 3, 4, 5)
PLAYER_B_PITS = (7, 8, 9, 10, 11)
INITIAL_PEASANTS_PER_PIT = 5
INITIAL_QUAN_PEASANTS = 0
TOTAL_PEASANTS = 50
TOTAL_MANDARINS = 2

# Extra Rules
# A Mandarin pit holding fewer peasants than this cannot be captured
QUAN_NON_THRESHOLD = 5
# Peasants returned to the board when a player's row is empty
REDISTRIBUTION_COST = 5
# Rounds during which no Quan pit may be captured
PROTECTED_OPENING_ROUNDS = 2

# Rule Defaults
DEFAULT_MANDARIN_POINT_VALUE = 10
DEFAULT_MAX_ROUNDS = 25
DEFAULT_RELAY_ENABLED = True
DEFAULT_SWEEP_AT_END = True
DEFAULT_QUAN_LEFTOVER_TO_SIDE_OWNER = True

# Hard cap on events emitted by a single move
MOVE_EVENT_BUDGET = 10_000

# Scripted Agents
DEFAULT_SEARCH_DEPTH = 2
DEFAULT_SEARCH_NODE_BUDGET = 200_000
RANDOM_REASON = "random choice"

# LLM Agent Configuration
DEFAULT_LLM_ENDPOINT_URL = "https://api.openai.com/v1"
DEFAULT_LLM_MODEL = "gpt-4o-mini"
DEFAULT_MAX_RETRIES = 3
DEFAULT_REQUEST_TIMEOUT = 60.0
DEFAULT_API_KEY_ENV_VAR = "LLM_API_KEY"
# Retries performed by the HTTP client itself on transient transport errors
DEFAULT_TRANSPORT_RETRIES = 2
DEFAULT_MAX_IN_FLIGHT = 4
DEFAULT_PERSONA = "Balanced"
FIRST_MOVE_HISTORY = "(first move)"
FALLBACK_REASON_MAX_CHARS = 500

# Arena
DEFAULT_GAMES = 50
DEFAULT_BASE_SEED = 0
DEFAULT_WORKERS = 1
DEFAULT_OUTPUT_DIR = "runs"
DEFAULT_RUN_CONFIG_PATH = "quan_arena.json"
MANIFEST_FILENAME = "manifest.json"
LOG_FILENAME_TEMPLATE = "game_{index:04d}.jsonl"

# Analysis
# Ending-round upper bounds of the early and mid game phases
EARLY_GAME_LAST_ROUND = 10
MID_GAME_LAST_ROUND = 20
RATE_DECIMALS = 1
DISTRIBUTION_DECIMALS = 2
CLASSIFICATION_CACHE_FILENAME = "classification_cache.jsonl"
REASON_DIGEST_LENGTH = 16
LABELED_TURNS_FILENAME = "labeled_turns.jsonl"
REPORT_JSON_FILENAME = "report.json"
RATES_CSV_FILENAME = "rates.csv"
PHASES_CSV_FILENAME = "phases.csv"
DEPTH_CSV_FILENAME = "depth_per_round.csv"
REASONING_CSV_FILENAME = "reasoning_per_round.csv"

# Built-in Personas
BUILTIN_PERSONAS = {
    "Balanced": (
        "You are a balanced player. Weigh the points a move captures right now "
        "against the tokens it leaves exposed on your row, and prefer moves that "
        "keep both your score and your future options healthy."
    ),
    "Defensive": (
        "You are a defensive player. Avoid leaving an empty pit followed by a "
        "loaded pit where your opponent could start a capture chain, keep tokens "
        "spread across your row, and only capture when it does not weaken your side."
    ),
    "QuickPlay": (
        "You are a quick, practical player. Pick a sound move fast: take any "
        "capture that is available now and do not spend effort on long plans."
    ),
    "RiskTaker": (
        "You are a risk taker. Look for long relay sequences and Mandarin "
        "captures with a big payoff, even if the move leaves your row exposed."
    ),
    "StrategicControl": (
        "You are a strategic controller. Build up tokens next to the Quan pits, "
        "steer the game toward positions where you decide when the Mandarins fall, "
        "and plan several moves ahead."
    ),
}

# Command Line
REASONING_JSON_FILENAME = "reasoning.json"
COMPARISON_CSV_FILENAME = "comparison.csv"
ANALYSIS_SUBDIR = "analysis"
PLAY_SUBDIR = "play"
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2
