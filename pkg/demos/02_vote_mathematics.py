"""The probabilistic core: softmax voter choice, the exact Poisson-binomial
vote-count distribution, and the two storyteller objectives built on it.

Run: python3 demos/02_vote_mathematics.py
"""

import numpy as np

from dixit.votes import (
    brute_force_vote_count_distribution,
    expected_votes,
    p_scoring,
    vote_count_distribution,
    voter_choice_probabilities,
)

print("== voter choice model ==")
scores = {"c1": 0.9, "c2": 0.4, "c3": 0.4, "c4": 0.1}
for temperature in (2.0, 1.0, 0.2):
    probs = voter_choice_probabilities(scores, own_card="c4", temperature=temperature)
    pretty = ", ".join(f"{c}={p:.3f}" for c, p in probs.items())
    print(f"T={temperature:>3}: {pretty}")
print("own card c4 always has probability exactly 0; lower temperature sharpens the pick")

print("\n== exact vote count distribution (n_V) ==")
p = [0.6, 0.35, 0.2]   # three voters' chances of picking the storyteller's card
dist = vote_count_distribution(p)
for k, mass in enumerate(dist):
    bar = "#" * int(round(mass * 40))
    print(f"P(n_V={k}) = {mass:.4f} {bar}")

print("\ncross-check against full joint enumeration:")
models = [{"story": pj, "other": 1 - pj} for pj in p]
brute = brute_force_vote_count_distribution(models, "story")
print(f"max |DP - enumeration| = {np.abs(dist - brute).max():.2e}")

print("\n== the two storyteller objectives ==")
n = 4
print(f"P_scoring (some but not all of the {n - 1} voters find the card) = {p_scoring(dist, n):.4f}")
print(f"E_votes (expected number of finders)                    = {expected_votes(dist):.4f}")

print("\nsweep: a phrase that is too obvious or too obscure scores nothing")
for q in (0.01, 0.2, 0.5, 0.8, 0.99):
    d = vote_count_distribution([q] * (n - 1))
    print(
        f"  per-voter pick prob {q:.2f}: P_scoring={p_scoring(d, n):.3f}  "
        f"E_votes={expected_votes(d):.2f}"
    )
