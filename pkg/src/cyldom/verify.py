"""Cross-checks between the transfer-matrix machinery and the brute-force oracle."""

from __future__ import annotations

from .oracle import (
    WASTED_LIMIT,
    almost_dominating_sets,
    brute_force_wasted_min,
    decode_words,
    encode_words,
    is_almost_dominating,
    outer_neighborhood_size,
    outer_wasted,
)
from .errors import BoundsError
from .transfer import build_transfer_matrix, newly_dominated
from .tropical import INF, matrix_power, min_diagonal
from .words import enumerate_correct_words


def closed_walks(r: int, n: int):
    """Every closed walk of length ``n`` in the transfer digraph, as word-index tuples."""
    a = build_transfer_matrix(r).entries
    succ = [[int(j) for j in (row != INF).nonzero()[0]] for row in a]
    out = []

    def extend(walk):
        if len(walk) == n:
            if walk[0] in succ[walk[-1]]:
                out.append(tuple(walk))
            return
        for nxt in succ[walk[-1]]:
            walk.append(nxt)
            extend(walk)
            walk.pop()

    for start in range(len(succ)):
        extend([start])
    return out


def verify_properties(r: int, n: int) -> dict:
    """Run every small-instance property for the strip ``P_r x C_n``; name -> passed."""
    if r * n > WASTED_LIMIT:
        raise BoundsError(f"verification needs rows*cols <= {WASTED_LIMIT}, got {r * n}")
    table = enumerate_correct_words(r)
    a = build_transfer_matrix(r)
    sets = list(almost_dominating_sets(r, n))

    nd_sum = walk = round_trip = True
    encoded = set()
    for s in sets:
        words = encode_words(s)
        idx = tuple(table.index(w) for w in words)
        encoded.add(idx)
        steps = list(zip(words, words[1:] + words[:1]))
        nd_sum &= outer_neighborhood_size(s) == sum(newly_dominated(q, p).count for q, p in steps)
        walk &= outer_wasted(s) == sum(int(a.entries[idx[j], idx[(j + 1) % n]]) for j in range(n))
        round_trip &= decode_words(words) == s

    walks = closed_walks(r, n)
    decoded_ok = all(is_almost_dominating(decode_words([table[i] for i in w])) for w in walks)
    return {
        "min_diagonal": min_diagonal(matrix_power(a, n)) == brute_force_wasted_min(r, n).wasted,
        "nd_sum": nd_sum,
        "walk_label": walk,
        "round_trip": round_trip,
        "bijection": decoded_ok and len(walks) == len(sets) and set(walks) == encoded,
    }
