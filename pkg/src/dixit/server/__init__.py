from .protocol import CLIENT_TYPES, SERVER_TYPES, envelope
from .session import GameSession, SessionConfig
from .views import project_state_for_player

__all__ = [
    "CLIENT_TYPES",
    "SERVER_TYPES",
    "GameSession",
    "SessionConfig",
    "envelope",
    "project_state_for_player",
]
