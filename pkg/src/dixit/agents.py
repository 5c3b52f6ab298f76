"""The Dixit agent: vote estimation, phrase candidates, storyteller
strategies, decoy choice, vote choice, and end-game objective switching.

Every decision returns an AgentDecision whose explanation records the
strategy used, the objective value, the estimated vote-count distribution,
and the best rejected alternatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .association import AssociationModel, make_model
from .cards import CandidateLexicon, Card, Phrase
from .engine import HAND_SIZE, GameState, Phase
from .errors import EmptyLexicon, EmptyUnseenPool, OwnCardOnlyCard, UnknownCard
from .votes import expected_votes, p_scoring, voter_choice_probabilities


class ObjectiveMode(str, Enum):
    NORMAL = "normal"
    BLOCK = "block"


@dataclass
class GameContext:
    """Everything one agent may legitimately see when making a decision."""

    n_players: int
    seat: int
    hand: list[Card]
    scores: list[int]
    storyteller: int
    target_score: int
    unseen: list[Card]                  # deck minus own hand and seen cards
    model: AssociationModel
    temperature: float = 1.0
    samples: int = 2000
    rng: np.random.Generator = field(default_factory=np.random.default_rng)

    def __post_init__(self) -> None:
        hand_ids = {c.id for c in self.hand}
        overlap = hand_ids & {c.id for c in self.unseen}
        if overlap:
            raise ValueError(f"unseen pool overlaps own hand: {sorted(overlap)}")

    @property
    def needs_replacement(self) -> bool:
        """True when the pool cannot deal every opponent a full distinct hand."""
        return len(self.unseen) < HAND_SIZE * (self.n_players - 1)


@dataclass
class Alternative:
    action: str
    objective: float

    def to_dict(self) -> dict:
        return {"action": self.action, "objective": self.objective}


@dataclass
class Explanation:
    strategy: str
    objective: float
    distribution: list[float] | None
    alternatives: list[Alternative]
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "objective": self.objective,
            "distribution": self.distribution,
            "alternatives": [a.to_dict() for a in self.alternatives],
            "notes": dict(self.notes),
        }


@dataclass
class AgentDecision:
    kind: str                       # "phrase" | "decoy" | "vote"
    card_id: str
    tokens: tuple[str, ...] | None
    explanation: Explanation

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "card_id": self.card_id,
            "tokens": list(self.tokens) if self.tokens is not None else None,
            "explanation": self.explanation.to_dict(),
        }


def _sample_opponent_hands(ctx: GameContext) -> np.ndarray:
    """Draw (samples, n-1, hand) index matrices of opponent hands from the pool.

    When the pool covers 6*(n-1) cards the hands partition one shuffled draw;
    otherwise each opponent's hand is sampled independently (hands may then
    overlap across opponents, which decisions flag as replacement sampling).
    """
    if not ctx.unseen:
        raise EmptyUnseenPool("no unseen cards to simulate opponents from")
    if ctx.samples < 1:
        raise ValueError("sample count must be >= 1")
    n_pool = len(ctx.unseen)
    n_opp = ctx.n_players - 1
    hand_size = min(HAND_SIZE, n_pool)
    if ctx.needs_replacement:
        u = ctx.rng.random((ctx.samples, n_opp, n_pool))
        return np.argsort(u, axis=2)[:, :, :hand_size]
    u = ctx.rng.random((ctx.samples, n_pool))
    order = np.argsort(u, axis=1)[:, : HAND_SIZE * n_opp]
    return order.reshape(ctx.samples, n_opp, HAND_SIZE)


def _greedy_decoy_scores(
    pool: list[Card], pool_scores: np.ndarray, hands_idx: np.ndarray
) -> np.ndarray:
    """Per (sample, opponent): the score of the decoy a greedy opponent plays.

    Greedy means the hand card with the highest score; ties go to the lower
    card id. rank[i] is pool card i's position in that preference order.
    """
    preference = sorted(range(len(pool)), key=lambda i: (-pool_scores[i], pool[i].id))
    rank = np.empty(len(pool), dtype=int)
    rank[preference] = np.arange(len(pool))
    best_pos = rank[hands_idx].argmin(axis=2)
    decoy_idx = np.take_along_axis(hands_idx, best_pos[..., None], axis=2)[..., 0]
    return pool_scores[decoy_idx]


def _vote_distributions(
    cand_scores: np.ndarray,
    decoy_scores: np.ndarray,
    temperature: float,
) -> np.ndarray:
    """Per-sample exact n_V distributions for table slot 0 holding each
    candidate score, against the (samples, n-1) simulated decoy scores.

    Voter j's softmax choice runs over every slot except its own decoy; the
    per-sample n_V is then Poisson-binomial over the per-voter probabilities
    of picking slot 0. Returns (candidates, samples, n).
    """
    n_cand = len(cand_scores)
    samples, n_opp = decoy_scores.shape

    table = np.empty((n_cand, samples, n_opp + 1))
    table[:, :, 0] = np.asarray(cand_scores)[:, None]
    table[:, :, 1:] = decoy_scores[None, :, :]

    logits = table / temperature
    logits -= logits.max(axis=2, keepdims=True)
    weights = np.exp(logits)
    total = weights.sum(axis=2, keepdims=True)
    # voter j picks among all slots except its own decoy slot j
    pick_story = weights[:, :, :1] / (total - weights[:, :, 1:])

    dist = np.zeros((n_cand, samples, n_opp + 1))
    dist[:, :, 0] = 1.0
    for j in range(n_opp):
        pj = pick_story[:, :, j: j + 1]
        nxt = dist * (1.0 - pj)
        nxt[:, :, 1:] += dist[:, :, :-1] * pj
        dist = nxt
    return dist


def estimate_vote_distribution(
    card: Card,
    phrase: Phrase,
    ctx: GameContext,
    return_samples: bool = False,
) -> np.ndarray | tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo estimate of the vote-count distribution for (card, phrase).

    Per sample: deal each of the n-1 opponents a six-card hand from the
    unseen pool, let each play its highest-scoring decoy against the phrase,
    then let each opponent vote by softmax choice over the simulated table
    (own decoy excluded). The per-sample n_V distribution is exact
    (Poisson-binomial over the per-voter pick probabilities); samples are
    averaged.

    When the pool is smaller than 6*(n-1), opponent hands are drawn
    independently (they may overlap) and decisions flag the replacement
    sampling. With ``return_samples`` the (samples, n) matrix of per-sample
    distributions is returned too, which callers use for standard errors.
    """
    hands_idx = _sample_opponent_hands(ctx)
    pool_scores = np.array([ctx.model.score(c, phrase) for c in ctx.unseen])
    decoy_scores = _greedy_decoy_scores(ctx.unseen, pool_scores, hands_idx)
    cand = np.array([ctx.model.score(card, phrase)])
    dist = _vote_distributions(cand, decoy_scores, ctx.temperature)[0]
    mean = dist.mean(axis=0)
    if return_samples:
        return mean, dist
    return mean


def generate_candidate_phrases(
    card: Card,
    lexicon: CandidateLexicon,
    limit: int,
    model: AssociationModel,
) -> list[Phrase]:
    """The `limit` lexicon phrases scoring highest against the card.

    Descending by score; equal scores order lexicographically by tokens.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if not lexicon.phrases:
        raise EmptyLexicon("lexicon has no phrases")
    ranked = sorted(
        lexicon.phrases,
        key=lambda ph: (-model.score(card, ph), ph.sort_key()),
    )
    return ranked[:limit]


def _pair_evaluations(
    ctx: GameContext,
    lexicon: CandidateLexicon,
    candidate_limit: int | None,
) -> list[tuple[Card, Phrase, np.ndarray]]:
    """Estimate vote distributions for every (hand card, candidate phrase) pair.

    One set of simulated opponent hands is drawn for the whole decision and
    shared by every pair (common random numbers, which also sharpens the
    comparison between pairs); evaluation is batched per phrase. The rng
    stream consumption is reproducible for a fixed context.
    """
    limit = candidate_limit if candidate_limit is not None else len(lexicon)
    hand = sorted(ctx.hand, key=lambda c: c.id)
    per_card: dict[str, list[Phrase]] = {}
    wanted: dict[Phrase, list[Card]] = {}
    for card in hand:
        phrases = generate_candidate_phrases(card, lexicon, limit, ctx.model)
        per_card[card.id] = phrases
        for phrase in phrases:
            wanted.setdefault(phrase, []).append(card)

    hands_idx = _sample_opponent_hands(ctx)
    results: dict[tuple[str, tuple[str, ...]], tuple[Card, Phrase, np.ndarray]] = {}
    for phrase in sorted(wanted, key=lambda p: p.sort_key()):
        cards_here = wanted[phrase]
        pool_scores = np.array([ctx.model.score(c, phrase) for c in ctx.unseen])
        decoy_scores = _greedy_decoy_scores(ctx.unseen, pool_scores, hands_idx)
        cand = np.array([ctx.model.score(c, phrase) for c in cards_here])
        dists = _vote_distributions(cand, decoy_scores, ctx.temperature).mean(axis=1)
        for card, dist in zip(cards_here, dists):
            results[(card.id, phrase.sort_key())] = (card, phrase, dist)

    return [
        results[(card.id, phrase.sort_key())]
        for card in hand
        for phrase in per_card[card.id]
    ]


def _pair_label(card: Card, phrase: Phrase) -> str:
    return f"{card.id} | {phrase.text}"


def _rejected(
    evals: list[tuple[str, float]],
    chosen: str,
    best_first: bool,
    top: int = 3,
) -> list[Alternative]:
    rest = [(label, obj) for label, obj in evals if label != chosen]
    rest.sort(key=lambda e: (-e[1] if best_first else e[1], e[0]))
    return [Alternative(action=label, objective=float(obj)) for label, obj in rest[:top]]


def storyteller_move_strategy1(
    ctx: GameContext,
    lexicon: CandidateLexicon,
    candidate_limit: int | None = None,
) -> AgentDecision:
    """Pick the (card, phrase) pair maximizing the interior-vote probability
    P(0 < n_V < n-1). Ties resolve to the lexicographically least pair."""
    evals = _pair_evaluations(ctx, lexicon, candidate_limit)
    scored = [
        (card, phrase, dist, p_scoring(dist, ctx.n_players)) for card, phrase, dist in evals
    ]
    best = min(scored, key=lambda e: (-e[3], e[0].id, e[1].sort_key()))
    card, phrase, dist, objective = best

    explanation = Explanation(
        strategy="storyteller_strategy_1",
        objective=float(objective),
        distribution=[float(x) for x in dist],
        alternatives=_rejected(
            [(_pair_label(c, p), o) for c, p, _, o in scored],
            _pair_label(card, phrase),
            best_first=True,
        ),
        notes={
            "samples": ctx.samples,
            "sampled_with_replacement": ctx.needs_replacement,
        },
    )
    return AgentDecision(kind="phrase", card_id=card.id, tokens=phrase.tokens, explanation=explanation)


def storyteller_move_strategy2(
    ctx: GameContext,
    lexicon: CandidateLexicon,
    candidate_limit: int | None = None,
    epsilon: float = 0.05,
) -> AgentDecision:
    """Among pairs with P(n_V >= 1) above the epsilon floor, minimize the
    expected vote count; fall back to strategy #1's choice when nothing
    clears the floor."""
    evals = _pair_evaluations(ctx, lexicon, candidate_limit)
    scored = [
        (card, phrase, dist, expected_votes(dist), float(1.0 - dist[0]))
        for card, phrase, dist in evals
    ]
    eligible = [e for e in scored if e[4] > epsilon]

    if eligible:
        best = min(eligible, key=lambda e: (e[3], e[0].id, e[1].sort_key()))
        card, phrase, dist, objective, _ = best
        explanation = Explanation(
            strategy="storyteller_strategy_2",
            objective=float(objective),
            distribution=[float(x) for x in dist],
            alternatives=_rejected(
                [(_pair_label(c, p), o) for c, p, _, o, pp in eligible],
                _pair_label(card, phrase),
                best_first=False,
            ),
            notes={
                "samples": ctx.samples,
                "epsilon": epsilon,
                "sampled_with_replacement": ctx.needs_replacement,
            },
        )
        return AgentDecision(kind="phrase", card_id=card.id, tokens=phrase.tokens, explanation=explanation)

    # no pair clears the floor: use strategy #1's objective on the same estimates
    fallback = min(scored, key=lambda e: (-p_scoring(e[2], ctx.n_players), e[0].id, e[1].sort_key()))
    card, phrase, dist, _, _ = fallback
    explanation = Explanation(
        strategy="storyteller_strategy_2",
        objective=float(p_scoring(dist, ctx.n_players)),
        distribution=[float(x) for x in dist],
        alternatives=_rejected(
            [(_pair_label(c, p), p_scoring(d, ctx.n_players)) for c, p, d, _, _ in scored],
            _pair_label(card, phrase),
            best_first=True,
        ),
        notes={
            "samples": ctx.samples,
            "epsilon": epsilon,
            "fallback_to_strategy_1": True,
            "sampled_with_replacement": ctx.needs_replacement,
        },
    )
    return AgentDecision(kind="phrase", card_id=card.id, tokens=phrase.tokens, explanation=explanation)


def choose_decoy(phrase: Phrase, ctx: GameContext) -> AgentDecision:
    """Play the hand card with the highest expected vote count for the phrase."""
    hand = sorted(ctx.hand, key=lambda c: c.id)
    hands_idx = _sample_opponent_hands(ctx)
    pool_scores = np.array([ctx.model.score(c, phrase) for c in ctx.unseen])
    decoy_scores = _greedy_decoy_scores(ctx.unseen, pool_scores, hands_idx)
    cand = np.array([ctx.model.score(c, phrase) for c in hand])
    dists = _vote_distributions(cand, decoy_scores, ctx.temperature).mean(axis=1)
    scored = [
        (card, dist, expected_votes(dist)) for card, dist in zip(hand, dists)
    ]
    best = min(scored, key=lambda e: (-e[2], e[0].id))
    card, dist, objective = best

    explanation = Explanation(
        strategy="decoy_expected_votes",
        objective=float(objective),
        distribution=[float(x) for x in dist],
        alternatives=_rejected(
            [(c.id, o) for c, _, o in scored], card.id, best_first=True
        ),
        notes={
            "phrase": phrase.text,
            "samples": ctx.samples,
            "sampled_with_replacement": ctx.needs_replacement,
        },
    )
    return AgentDecision(kind="decoy", card_id=card.id, tokens=None, explanation=explanation)


def endgame_objective(ctx: GameContext) -> ObjectiveMode:
    """BLOCK when someone else is storytelling within 3 points of the target."""
    if ctx.seat != ctx.storyteller and ctx.scores[ctx.storyteller] >= ctx.target_score - 3:
        return ObjectiveMode.BLOCK
    return ObjectiveMode.NORMAL


def choose_vote(
    table: list[Card],
    own_card: str,
    phrase: Phrase,
    ctx: GameContext,
    mode: ObjectiveMode | None = None,
) -> AgentDecision:
    """Vote for the most (NORMAL) or least (BLOCK) believable storyteller card.

    Belief is the softmax of association scores over the table minus the
    agent's own card, i.e. a posterior under a uniform prior.
    """
    ids = [c.id for c in table]
    if own_card not in ids:
        raise UnknownCard(f"own card {own_card!r} is not on the table")
    others = [c for c in table if c.id != own_card]
    if not others:
        raise OwnCardOnlyCard("cannot vote: own card is the only card on the table")

    if mode is None:
        mode = endgame_objective(ctx)

    scores = {c.id: ctx.model.score(c, phrase) for c in table}
    belief = voter_choice_probabilities(scores, own_card, ctx.temperature)

    blocking = mode is ObjectiveMode.BLOCK
    candidates = sorted(others, key=lambda c: (belief[c.id] if blocking else -belief[c.id], c.id))
    vote = candidates[0]

    explanation = Explanation(
        strategy="vote_belief_argmin_block" if blocking else "vote_belief_argmax",
        objective=float(belief[vote.id]),
        distribution=[float(belief[i]) for i in ids],
        alternatives=_rejected(
            [(c.id, belief[c.id]) for c in others], vote.id, best_first=not blocking
        ),
        notes={"mode": mode.value, "table": ids, "phrase": phrase.text},
    )
    return AgentDecision(kind="vote", card_id=vote.id, tokens=None, explanation=explanation)


# -- seat-level wrapper ---------------------------------------------------------


@dataclass
class AgentSpec:
    """Configuration for one bot seat; see also the agent config file format."""

    model: str = "tag_jaccard"
    strategy: str = "strategy1"       # strategy1 | strategy2 | random_phrase
    temperature: float = 1.0
    epsilon: float = 0.05
    samples: int = 2000
    candidate_limit: int | None = 8
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "strategy": self.strategy,
            "temperature": self.temperature,
            "epsilon": self.epsilon,
            "samples": self.samples,
            "candidate_limit": self.candidate_limit,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AgentSpec":
        known = {f: d[f] for f in cls.__dataclass_fields__ if f in d}
        return cls(**known)


STRATEGIES = ("strategy1", "strategy2", "random_phrase")


class DixitAgent:
    """One bot seat: owns its association model and rng stream for a game."""

    def __init__(self, spec: AgentSpec, lexicon: CandidateLexicon, seed: int | None = None):
        if spec.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {spec.strategy!r}; choose from {STRATEGIES}")
        self.spec = spec
        self.lexicon = lexicon
        self.model = make_model(spec.model, lexicon=lexicon, seed=spec.seed)
        self.rng = np.random.default_rng(seed if seed is not None else spec.seed)

    def context(self, state: GameState, seat: int) -> GameContext:
        return build_context(
            state,
            seat,
            model=self.model,
            temperature=self.spec.temperature,
            samples=self.spec.samples,
            rng=self.rng,
        )

    def storyteller_move(self, state: GameState, seat: int) -> AgentDecision:
        if self.spec.strategy == "random_phrase":
            return self._random_phrase_move(state, seat)
        ctx = self.context(state, seat)
        if self.spec.strategy == "strategy2":
            return storyteller_move_strategy2(
                ctx, self.lexicon, self.spec.candidate_limit, self.spec.epsilon
            )
        return storyteller_move_strategy1(ctx, self.lexicon, self.spec.candidate_limit)

    def _random_phrase_move(self, state: GameState, seat: int) -> AgentDecision:
        hand = sorted(state.hands[seat], key=lambda c: c.id)
        legal = [p for p in self.lexicon.phrases if len(p) <= state.config.phrase_limit]
        if not legal:
            raise EmptyLexicon("no lexicon phrase fits the phrase limit")
        card = hand[int(self.rng.integers(len(hand)))]
        phrase = legal[int(self.rng.integers(len(legal)))]
        explanation = Explanation(
            strategy="random_phrase",
            objective=0.0,
            distribution=None,
            alternatives=[],
            notes={"uniform_over": {"cards": len(hand), "phrases": len(legal)}},
        )
        return AgentDecision(kind="phrase", card_id=card.id, tokens=phrase.tokens, explanation=explanation)

    def decoy_move(self, state: GameState, seat: int) -> AgentDecision:
        ctx = self.context(state, seat)
        assert state.round.phrase is not None
        return choose_decoy(state.round.phrase, ctx)

    def vote_move(self, state: GameState, seat: int) -> AgentDecision:
        ctx = self.context(state, seat)
        assert state.round.phrase is not None
        table = [state.cards_by_id[slot.card_id] for slot in state.round.table]
        return choose_vote(table, state.round.submissions[seat], state.round.phrase, ctx)


def build_context(
    state: GameState,
    seat: int,
    model: AssociationModel,
    temperature: float = 1.0,
    samples: int = 2000,
    rng: np.random.Generator | None = None,
) -> GameContext:
    """Context from a seat's legitimate knowledge: own hand, the scoreboard,
    and every card it has seen (discards, revealed tables, own submissions)."""
    hand = list(state.hands[seat])
    seen = {c.id for c in hand}
    seen.update(c.id for c in state.discard)
    if seat in state.round.submissions:
        seen.add(state.round.submissions[seat])
    if state.phase in (Phase.AWAIT_VOTES, Phase.ROUND_SCORED):
        seen.update(slot.card_id for slot in state.round.table)
    unseen = [c for c in state.cards_by_id.values() if c.id not in seen]
    unseen.sort(key=lambda c: c.id)

    return GameContext(
        n_players=state.n_players,
        seat=seat,
        hand=hand,
        scores=list(state.scores),
        storyteller=state.storyteller,
        target_score=state.config.target_score,
        unseen=unseen,
        model=model,
        temperature=temperature,
        samples=samples,
        rng=rng if rng is not None else np.random.default_rng(0),
    )
