"""Exception types raised across the engine, vote model, agents, and server."""


class DixitError(Exception):
    """Base class for all errors raised by this package."""

    #: short machine-readable code, used in wire Error messages and CLI output
    code = "error"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        msg = super().__str__()
        return msg if msg else self.code


# -- engine ------------------------------------------------------------------

class DeckTooSmall(DixitError):
    code = "deck_too_small"


class DuplicateCardId(DixitError):
    code = "duplicate_card_id"


class WrongPhase(DixitError):
    code = "wrong_phase"


class CardNotInHand(DixitError):
    code = "card_not_in_hand"


class PhraseTooLong(DixitError):
    code = "phrase_too_long"


class AlreadySubmitted(DixitError):
    code = "already_submitted"


class OwnCardVote(DixitError):
    code = "own_card_vote"


class UnknownCard(DixitError):
    code = "unknown_card"


class UnknownPlayer(DixitError):
    code = "unknown_player"


# -- vote model ---------------------------------------------------------------

class EmptyTable(DixitError):
    code = "empty_table"


class BadTemperature(DixitError):
    code = "bad_temperature"


class ProbabilityOutOfRange(DixitError):
    code = "probability_out_of_range"


class TooLargeToEnumerate(DixitError):
    code = "too_large_to_enumerate"


class SizeMismatch(DixitError):
    code = "size_mismatch"


# -- agents -------------------------------------------------------------------

class EmptyUnseenPool(DixitError):
    code = "empty_unseen_pool"


class EmptyLexicon(DixitError):
    code = "empty_lexicon"


class OwnCardOnlyCard(DixitError):
    code = "own_card_only_card"


# -- transcripts and server ----------------------------------------------------

class CorruptTranscript(DixitError):
    code = "corrupt_transcript"


class SeatCountInvalid(DixitError):
    code = "seat_count_invalid"


class ProtocolViolation(DixitError):
    code = "protocol_violation"
