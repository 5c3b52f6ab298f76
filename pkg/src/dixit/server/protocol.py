"""Wire protocol: JSON message envelopes over a persistent bidirectional
channel, one message per frame. PROTOCOL.md in the repository root is the
normative schema; the constants here mirror it.

Clients may only ever send JoinLobby, SubmitPhrase, SubmitCard, and
SubmitVote. There is no chat channel.
"""

from __future__ import annotations

from ..errors import ProtocolViolation

CLIENT_TYPES = ("JoinLobby", "SubmitPhrase", "SubmitCard", "SubmitVote")

SERVER_TYPES = (
    "LobbyState",
    "GameStart",
    "StateUpdate",
    "RoundResult",
    "Explanation",
    "GameEnd",
    "Error",
)

#: client message types that are game actions (require a started game)
ACTION_TYPES = ("SubmitPhrase", "SubmitCard", "SubmitVote")


def envelope(msg_type: str, seq: int, payload: dict) -> dict:
    return {"type": msg_type, "seq": seq, "payload": payload}


def parse_client_message(raw: dict) -> tuple[str, dict]:
    """Validate an inbound frame's shape and type; returns (type, payload)."""
    if not isinstance(raw, dict):
        raise ProtocolViolation("message frame must be a JSON object")
    msg_type = raw.get("type")
    if msg_type not in CLIENT_TYPES:
        raise ProtocolViolation(
            f"illegal client message type {msg_type!r}; clients may send only {CLIENT_TYPES}"
        )
    payload = raw.get("payload", {})
    if not isinstance(payload, dict):
        raise ProtocolViolation("payload must be a JSON object")
    return msg_type, payload
