"""Acceptance suite: one test per criterion, each printing a PASS line with
its measured runtime (run with `pytest tests/test_acceptance.py -v -s`).

Tolerances and budgets are pinned here and nowhere else:
  1. scoring exhaustiveness ..... exact match, n in {4,5}, < 1 s
  2. score-cases fidelity ....... exact, same sweep, < 1 s
  3. distribution oracle ........ TV <= 1e-9 over 1000 instances, < 10 s
  4. strategy-oracle agreement .. 100% on instances whose objective gap
                                  exceeds max(3 Monte-Carlo standard errors,
                                  1e-9 float-tie floor), 50 instances, < 2 min
  5. determinism ................ byte-identical transcripts+reports, 100
                                  games, < 2 min
  6. symmetry null .............. per-seat win rate within 3 sigma of 0.25,
                                  200 games, < 5 min
  7. end-game switch ............ vote equals belief argmin, exact
  8. leak freedom ............... zero violations over 50 sessions
  9. explanation completeness ... zero misses across all transcripts
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from dixit.agents import (
    AgentSpec,
    GameContext,
    choose_decoy,
    choose_vote,
    endgame_objective,
    ObjectiveMode,
    storyteller_move_strategy1,
    storyteller_move_strategy2,
)
from dixit.cards import CandidateLexicon, Card, Phrase, load_deck, load_lexicon
from dixit.engine import GameConfig, Phase, score_round
from dixit.server.session import GameSession, SessionConfig
from dixit.tournament import TournamentConfig, run_tournament
from dixit.transcript import load_transcript
from dixit.votes import (
    brute_force_vote_count_distribution,
    expected_votes,
    p_scoring,
    vote_count_distribution,
)

from agent_oracle import (
    ScriptedModel,
    exact_expected_votes,
    exact_p_scoring,
    exact_vote_distribution,
    oracle_decoy,
    oracle_strategy1,
    oracle_strategy2,
    oracle_vote,
)
from scoring_oracle import all_vote_assignments, literal_score

DATA = Path(__file__).resolve().parent.parent / "data"

# float-roundoff floor for "the gap exceeds 3 standard errors" when the
# Monte-Carlo spread is itself zero (exact ties decided by noise)
TIE_FLOOR = 1e-9


def _report(name, elapsed, budget, detail=""):
    suffix = f" ({detail})" if detail else ""
    print(f"PASS {name}: {elapsed:.2f}s of {budget:.0f}s budget{suffix}")


# -- 1 & 2: exhaustive scoring ------------------------------------------------------

def test_criterion_scoring_exhaustiveness():
    start = time.monotonic()
    checked = 0
    for n in (4, 5):
        for submissions, votes in all_vote_assignments(n):
            expected_points, expected_nv = literal_score(submissions, votes, 0, n)
            score = score_round(submissions, votes, storyteller=0, n=n)
            assert score.points == expected_points, (n, votes)
            assert score.n_v == expected_nv
            checked += 1
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    _report("scoring-exhaustiveness", elapsed, 1, f"{checked} assignments")


def test_criterion_score_cases_fidelity():
    start = time.monotonic()
    checked = 0
    for n in (4, 5):
        for submissions, votes in all_vote_assignments(n):
            score = score_round(submissions, votes, storyteller=0, n=n)
            interior = 0 < score.n_v < n - 1
            assert (score.points[0] == 3) == interior
            assert score.points[0] == (3 if interior else 0)
            checked += 1
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    _report("score-cases-fidelity", elapsed, 1, f"{checked} assignments")


# -- 3: Poisson-binomial against the joint enumerator ---------------------------------

def test_criterion_distribution_oracle():
    start = time.monotonic()
    rng = np.random.default_rng(20260810)
    worst = 0.0
    for _ in range(1000):
        voters = int(rng.integers(2, 6))
        cards = voters + 1          # a real table: one card per player
        ids = [f"c{j}" for j in range(cards)]
        models = []
        for v in range(voters):
            weights = rng.random(cards)
            weights[1 + v % (cards - 1)] = 0.0
            weights /= weights.sum()
            models.append(dict(zip(ids, weights.tolist())))
        p = [m[ids[0]] for m in models]
        fast = vote_count_distribution(p)
        slow = brute_force_vote_count_distribution(models, ids[0])
        worst = max(worst, 0.5 * float(np.abs(fast - slow).sum()))
    elapsed = time.monotonic() - start
    assert worst <= 1e-9
    assert elapsed < 10.0
    _report("distribution-oracle", elapsed, 10, f"worst TV {worst:.2e}")


# -- 4: strategies against exhaustive enumeration ---------------------------------------

def _tiny_instance(rng):
    pool = [Card(id=f"p{i}") for i in range(6)]
    hand = [Card(id="h1"), Card(id="h2")]
    lexicon = CandidateLexicon(
        phrases=[Phrase(("alpha",)), Phrase(("beta",)), Phrase(("gamma",))]
    )
    scores = {
        (c.id, p.text): float(rng.random())
        for c in pool + hand
        for p in lexicon.phrases
    }
    model = ScriptedModel(scores)
    return pool, hand, lexicon, model


def _ctx(pool, hand, model, seed, samples=300):
    return GameContext(
        n_players=4,
        seat=0,
        hand=list(hand),
        scores=[0, 0, 0, 0],
        storyteller=0,
        target_score=30,
        unseen=list(pool),
        model=model,
        temperature=1.0,
        samples=samples,
        rng=np.random.default_rng(seed),
    )


def _mc_sigma(pool, hand, model, phrase, seed, samples=300):
    """Largest per-pair Monte-Carlo standard error in this instance's regime
    (zero when the pool pins the opponents' hands)."""
    from dixit.agents import estimate_vote_distribution

    ctx = _ctx(pool, hand, model, seed, samples)
    _, per_sample = estimate_vote_distribution(hand[0], phrase, ctx, return_samples=True)
    interior = per_sample[:, 1:3].sum(axis=1)
    votes = per_sample @ np.arange(4)
    n = len(interior)
    return (
        float(interior.std(ddof=1) / np.sqrt(n)),
        float(votes.std(ddof=1) / np.sqrt(n)),
    )


def test_criterion_strategy_oracle_agreement():
    start = time.monotonic()
    rng = np.random.default_rng(424242)
    epsilon = 0.05
    gapped = {"s1": 0, "s2": 0, "decoy": 0, "vote": 0}
    agreed = {"s1": 0, "s2": 0, "decoy": 0, "vote": 0}

    for instance in range(50):
        pool, hand, lexicon, model = _tiny_instance(rng)
        seed = 1000 + instance
        oracle_ctx = _ctx(pool, hand, model, seed=0)
        sigma_p, sigma_e = _mc_sigma(pool, hand, model, lexicon.phrases[0], seed)

        # exact objective landscape for the gap filter
        pair_metrics = []
        for card in hand:
            for phrase in lexicon.phrases:
                dist = exact_vote_distribution(card, phrase, oracle_ctx)
                pair_metrics.append(
                    (exact_p_scoring(dist, 4), exact_expected_votes(dist), 1.0 - dist[0])
                )

        # storyteller strategy #1
        values = sorted((m[0] for m in pair_metrics), reverse=True)
        gap = values[0] - values[1]
        if gap > max(3 * sigma_p, TIE_FLOOR):
            gapped["s1"] += 1
            decision = storyteller_move_strategy1(
                _ctx(pool, hand, model, seed), lexicon
            )
            card, phrase, _ = oracle_strategy1(oracle_ctx, lexicon)
            if decision.card_id == card.id and decision.tokens == phrase.tokens:
                agreed["s1"] += 1

        # storyteller strategy #2 (skip instances where eligibility is in doubt)
        eligible = [m[1] for m in pair_metrics if m[2] > epsilon]
        margin_ok = all(abs(m[2] - epsilon) > TIE_FLOOR for m in pair_metrics)
        if len(eligible) >= 2 and margin_ok:
            values = sorted(eligible)
            gap = values[1] - values[0]
            if gap > max(3 * sigma_e, TIE_FLOOR):
                gapped["s2"] += 1
                decision = storyteller_move_strategy2(
                    _ctx(pool, hand, model, seed), lexicon, epsilon=epsilon
                )
                want = oracle_strategy2(oracle_ctx, lexicon, epsilon)
                if (
                    want is not None
                    and decision.card_id == want[0].id
                    and decision.tokens == want[1].tokens
                ):
                    agreed["s2"] += 1

        # decoy choice against the storyteller's first phrase
        phrase = lexicon.phrases[0]
        decoy_values = sorted(
            (
                exact_expected_votes(exact_vote_distribution(card, phrase, oracle_ctx))
                for card in hand
            ),
            reverse=True,
        )
        if decoy_values[0] - decoy_values[1] > max(3 * sigma_e, TIE_FLOOR):
            gapped["decoy"] += 1
            decision = choose_decoy(phrase, _ctx(pool, hand, model, seed))
            card, _ = oracle_decoy(phrase, oracle_ctx)
            if decision.card_id == card.id:
                agreed["decoy"] += 1

        # vote choice over a simulated table (exact both ways; no MC error)
        table = [Card(id="own")] + pool[:3]
        table_model = ScriptedModel(
            {(c.id, phrase.text): float(rng.random()) for c in table}
        )
        beliefs = sorted(
            (table_model.score(c, phrase) for c in table if c.id != "own"),
            reverse=True,
        )
        if beliefs[0] - beliefs[1] > TIE_FLOOR:
            gapped["vote"] += 1
            vote_ctx = _ctx(table[:1], pool[3:], table_model, seed)
            decision = choose_vote(table, "own", phrase, vote_ctx)
            if decision.card_id == oracle_vote(table, "own", phrase, vote_ctx):
                agreed["vote"] += 1

    elapsed = time.monotonic() - start
    assert elapsed < 120.0
    for key in gapped:
        assert gapped[key] > 0, f"no gapped instances exercised {key}"
        assert agreed[key] == gapped[key], (
            f"{key}: {agreed[key]}/{gapped[key]} gapped instances agreed"
        )
    detail = ", ".join(f"{k} {agreed[k]}/{gapped[k]}" for k in gapped)
    _report("strategy-oracle-agreement", elapsed, 120, detail)


# -- 5: byte-identical reruns --------------------------------------------------------------

def _tournament_config(games, seed, specs=None):
    specs = specs or [
        AgentSpec(model="tag_jaccard", strategy="strategy1", samples=200, candidate_limit=3, seed=1),
        AgentSpec(model="tag_jaccard", strategy="strategy2", samples=200, candidate_limit=3, seed=2),
        AgentSpec(model="seeded_random", strategy="strategy1", samples=200, candidate_limit=3, seed=3),
        AgentSpec(model="tag_jaccard", strategy="random_phrase", samples=200, candidate_limit=3, seed=4),
    ]
    return TournamentConfig(
        games=games,
        agents=specs,
        deck_path=str(DATA / "deck.jsonl"),
        lexicon_path=str(DATA / "lexicon.jsonl"),
        game=GameConfig(n_players=4, target_score=30),
        master_seed=seed,
    )


def test_criterion_determinism(tmp_path):
    start = time.monotonic()
    config = _tournament_config(games=100, seed=8)
    run_tournament(config, tmp_path / "a")
    run_tournament(config, tmp_path / "b")
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert sorted(p.name for p in (tmp_path / "b").iterdir()) == names
    for name in names:
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        assert a == b, f"{name} differs between identically seeded runs"
    elapsed = time.monotonic() - start
    assert elapsed < 120.0
    _report("determinism", elapsed, 120, f"{len(names)} files byte-identical")

    # stash the transcripts for the explanation-completeness criterion
    test_criterion_determinism.out_dir = tmp_path / "a"


def test_criterion_symmetry_null(tmp_path):
    start = time.monotonic()
    spec = AgentSpec(
        model="seeded_random", strategy="strategy1", samples=60, candidate_limit=2, seed=0
    )
    config = _tournament_config(games=200, seed=17, specs=[spec] * 4)
    report = run_tournament(config, tmp_path)
    sigma = (0.25 * 0.75 / 200) ** 0.5
    rates = [seat.win_rate for seat in report.seats]
    for seat, rate in enumerate(rates):
        assert abs(rate - 0.25) <= 3 * sigma, (
            f"seat {seat} win rate {rate:.3f} outside 0.25 +/- {3 * sigma:.3f}"
        )
    elapsed = time.monotonic() - start
    assert elapsed < 300.0
    _report(
        "symmetry-null", elapsed, 300,
        "rates " + ", ".join(f"{r:.3f}" for r in rates) + f" vs 0.25±{3 * sigma:.3f}",
    )


# -- 7: end-game objective switch -------------------------------------------------------------

def test_criterion_endgame_switch():
    start = time.monotonic()
    rng = np.random.default_rng(31337)
    table = [Card(id=f"t{i}") for i in range(3)] + [Card(id="own")]
    phrase = Phrase(("clue",))
    model = ScriptedModel({(c.id, "clue"): float(rng.random()) for c in table})
    ctx = GameContext(
        n_players=4,
        seat=0,
        hand=[Card(id="own")],
        scores=[5, 27, 9, 12],      # storyteller at target - 3
        storyteller=1,
        target_score=30,
        unseen=[Card(id="p1")],
        model=model,
        temperature=1.0,
        samples=10,
        rng=np.random.default_rng(0),
    )
    assert endgame_objective(ctx) is ObjectiveMode.BLOCK
    decision = choose_vote(table, "own", phrase, ctx)

    # independent argmin of the softmax belief
    want = oracle_vote(table, "own", phrase, ctx, block=True)
    assert decision.card_id == want
    assert decision.explanation.strategy == "vote_belief_argmin_block"

    # one point below the threshold the switch must stay off
    ctx.scores = [5, 26, 9, 12]
    assert endgame_objective(ctx) is ObjectiveMode.NORMAL
    normal = choose_vote(table, "own", phrase, ctx)
    assert normal.card_id == oracle_vote(table, "own", phrase, ctx, block=False)
    elapsed = time.monotonic() - start
    _report("endgame-switch", elapsed, 5, f"blocked vote {decision.card_id}")


# -- 8: leak freedom ---------------------------------------------------------------------------

def _scan_batch(session, outbound, violations):
    state = session.state
    if state is None:
        return
    hidden = {c.id for c in state.deck}
    hands = [{c.id for c in hand} for hand in state.hands]
    for seat, env in outbound:
        if env["type"] != "StateUpdate":
            continue
        view = env["payload"]
        blob = json.dumps(view)
        for other in range(state.n_players):
            if other == seat:
                continue
            for card_id in hands[other]:
                if f'"{card_id}"' in blob:
                    violations.append(f"view for {seat} leaks {card_id} from hand {other}")
        for card_id in hidden:
            if f'"{card_id}"' in blob:
                violations.append(f"view for {seat} leaks undrawn card {card_id}")
        if view["phase"] not in ("round_scored", "game_over"):
            if '"votes"' in blob or '"owners"' in blob:
                violations.append(f"view for {seat} reveals votes in {view['phase']}")


def test_criterion_leak_freedom():
    start = time.monotonic()
    deck = load_deck(DATA / "deck.jsonl")
    lexicon = load_lexicon(DATA / "lexicon.jsonl", max_tokens=4)
    violations = []
    views_scanned = 0

    for run in range(50):
        rng = np.random.default_rng(5000 + run)
        n_humans = int(rng.integers(1, 3))
        config = SessionConfig(
            game=GameConfig(n_players=4, rng_seed=int(rng.integers(2**31)), target_score=7)
        )
        session = GameSession(
            f"leak-{run}", config, deck, lexicon,
            default_agent=AgentSpec(model="tag_jaccard", samples=40, candidate_limit=2),
        )
        human_seats = []
        for i in range(n_humans):
            seat, _ = session.join_human(f"h{i}")
            human_seats.append(seat)
        for _ in range(4 - n_humans):
            session.seat_agent()
        batch = session.start()
        _scan_batch(session, batch, violations)
        views_scanned += sum(1 for _, e in batch if e["type"] == "StateUpdate")

        for _ in range(400):
            if session.state.phase is Phase.GAME_OVER:
                break
            pending = session.pending_human_seats()
            if not pending:
                break
            seat = pending[int(rng.integers(len(pending)))]
            state = session.state
            if state.phase is Phase.AWAIT_STORYTELLER:
                hand = sorted(c.id for c in state.hands[seat])
                card = hand[int(rng.integers(len(hand)))]
                msg = {"type": "SubmitPhrase", "seq": 1,
                       "payload": {"card_id": card, "tokens": ["moon", "river"]}}
            elif state.phase is Phase.AWAIT_DECOYS:
                hand = sorted(c.id for c in state.hands[seat])
                card = hand[int(rng.integers(len(hand)))]
                msg = {"type": "SubmitCard", "seq": 1, "payload": {"card_id": card}}
            else:
                own = state.round.submissions[seat]
                options = sorted(s.card_id for s in state.round.table if s.card_id != own)
                card = options[int(rng.integers(len(options)))]
                msg = {"type": "SubmitVote", "seq": 1, "payload": {"card_id": card}}
            batch = session.handle_message(seat, msg)
            _scan_batch(session, batch, violations)
            views_scanned += sum(1 for _, e in batch if e["type"] == "StateUpdate")

        assert session.state.phase is Phase.GAME_OVER

    elapsed = time.monotonic() - start
    assert not violations, violations[:5]
    _report("leak-freedom", elapsed, 120, f"{views_scanned} views over 50 sessions clean")


# -- 9: explanation completeness ------------------------------------------------------------------

def test_criterion_explanation_completeness(tmp_path):
    start = time.monotonic()
    out_dir = getattr(test_criterion_determinism, "out_dir", None)
    if out_dir is None or not Path(out_dir).is_dir():
        run_tournament(_tournament_config(games=20, seed=8), tmp_path)
        out_dir = tmp_path

    actions = 0
    misses = 0
    transcripts = sorted(Path(out_dir).glob("game_*.jsonl"))
    assert transcripts
    for path in transcripts:
        records = load_transcript(path)
        for i, rec in enumerate(records):
            if rec["type"] in ("phrase", "decoy", "vote"):
                actions += 1
                follower = records[i + 1] if i + 1 < len(records) else {}
                ok = (
                    follower.get("type") == "explanation"
                    and follower.get("seat") == rec["seat"]
                    and follower.get("explanation", {}).get("strategy")
                )
                if not ok:
                    misses += 1
    elapsed = time.monotonic() - start
    assert actions > 0
    assert misses == 0, f"{misses} of {actions} agent actions lacked explanations"
    _report(
        "explanation-completeness", elapsed, 60,
        f"{actions} actions across {len(transcripts)} transcripts, 0 misses",
    )
