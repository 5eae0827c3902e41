"""
Prompt templates for LLM agents and the reasoning classifier.

Templates use angle-bracket placeholders that are substituted in a single
pass; nothing else in a finished prompt may contain them.
"""

PERSONA_PLACEHOLDER = "<persona>"
GAME_STATE_PLACEHOLDER = "<game_state>"
HISTORY_PLACEHOLDER = "<history>"
RULES_PLACEHOLDER = "<rules>"
REASONING_PLACEHOLDER = "<think>"

DECISION_PLACEHOLDERS = (
    PERSONA_PLACEHOLDER,
    GAME_STATE_PLACEHOLDER,
    HISTORY_PLACEHOLDER,
    RULES_PLACEHOLDER,
)

RULES_TEXT = """\
Board: a ring of 12 pits numbered 0-11. Pits 0 and 6 are Quan pits, each starting with one Mandarin token and no peasants. Pits 1-5 are Player A's row and pits 7-11 are Player B's row; each starts with 5 peasants.
Scattering: pick one of your own pits that holds peasants and a direction. LTR walks toward higher pit numbers, RTL toward lower ones, wrapping around the ring. Take every peasant from the pit and drop one into each following pit.
Relay: if the pit after your last drop is a non-empty regular pit, pick up all of its peasants and keep scattering in the same direction.
Quan stop: if the pit after your last drop is a Quan pit, your turn ends.
Capturing: if the pit after your last drop is empty and the pit after that holds tokens, you capture those tokens. Peasants score 1 point each, a Mandarin scores 10.
Endgame: the game ends when both Mandarins are captured, when the player to move cannot move, or after round 25. Peasants left in each row then go to that row's owner, and each Quan's leftovers go to the side it precedes (Quan 0 to A, Quan 6 to B).
Immature Mandarin: a Quan pit that still holds its Mandarin and fewer than 5 peasants cannot be captured.
Forced redistribution: if all five of your pits are empty at the start of your turn, you return 5 captured peasants to the board, one per pit. If you cannot, the game ends.
Early game restriction: no Quan pit can be captured during the first two rounds.
Two-empty rule: if the two pits after your last drop are both empty, your turn ends.
Forced capture chain: every available capture must be taken, and after a capture you keep capturing while the next pit is empty and the one after it holds tokens."""

DECISION_TEMPLATE = """\
You are an intelligent agent playing the traditional Vietnamese game "Ô Ăn Quan".

---

**Persona**:

<persona>

---

**Game States**
After the opponent takes action, here is the current board state:

<game_state>

---

**History**

My thoughts on the previous round: <history>

---

**Game Rules**

<rules>

---

**Task**

Based on the above rules and current game state, think about:

- Which position should you pick to scatter from?

- Which direction to scatter?

- Which move fits your strategy?"""

OUTPUT_FORMAT_INSTRUCTION = """\

---

**Answer Format**

Explain your reasoning first. Then finish your answer with exactly one JSON object on its own line, with these fields:
- "reason": a short explanation of the move (string)
- "position": the position in your own row to scatter from, counted 1-5 from your first pit (integer)
- "direction": "LTR" or "RTL" (string)

Example:
{"reason": "Scattering position 3 sets up a capture next turn.", "position": 3, "direction": "LTR"}"""

RETRY_NOTE_TEMPLATE = (
    "Your previous answer could not be used: {error}. "
    "Reply again and end with one JSON object with the fields reason, position and direction."
)

REASONING_LABELS = ("SHORT_TERM_GAIN", "LONG_TERM_STRATEGY", "AMBIGUOUS")

CLASSIFICATION_TEMPLATE = """\
You are analyzing the reasoning behind a move in the traditional Vietnamese board game Ô Ăn Quan.
In this game, players distribute peasant tokens across positions and try to capture their opponent's tokens, following complex rules including protection of Mandarin positions (Quan), avoiding Immature Mandarins, and maximizing long-term advantage.
Given the player's reasoning below, classify it into one of the following reason type.
In addition to predicting the label, please transcribe the reasoning and highlight the parts that led to the model's labeling decision using **bold text**.

Reasoning: <think>

---

Reason types:
- SHORT_TERM_GAIN: the move is chosen for points or captures available right now.
- LONG_TERM_STRATEGY: the move is chosen to set up future turns, protect the row or control the Mandarins.
- AMBIGUOUS: the reasoning does not show a clear motive.
Start your answer with the label."""
