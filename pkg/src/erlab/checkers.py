"""Independent validators for ordering and half-sequence outputs.

These recompute everything from the raw coloring with naive loops and share
no code with the constructors in bounds.py; they exist so a bug in a
constructor cannot hide inside its own validator.
"""

from __future__ import annotations

from .graphs import EdgeColoring


def _distinct_colors_back(coloring: EdgeColoring, seq, idx: int) -> int:
    seen = set()
    for j in range(idx):
        seen.add(coloring.color_of(seq[idx], seq[j]))
    return len(seen)


def _naive_most_frequent(coloring: EdgeColoring, k: int, x: int) -> int:
    tally: dict[int, int] = {}
    for y in range(k):
        if y == x:
            continue
        c = coloring.color_of(x, y)
        tally[c] = tally.get(c, 0) + 1
    best = None
    for c in sorted(tally):
        if best is None or tally[c] > tally[best]:
            best = c
    return best


def check_ordering(k: int, coloring: EdgeColoring, pi, g_values: dict[int, int]):
    """None when pi is a permutation of range(k) whose color-count sequence
    is non-decreasing with zero inversions and ell(i) >= g(i); otherwise a
    reason string."""
    pi = list(pi)
    if sorted(pi) != list(range(k)):
        return f"not a permutation of range({k}): {pi}"
    ell = [None] * k
    for i in range(1, k):
        ell[i] = _distinct_colors_back(coloring, pi, i)
    for i in range(1, k - 1):
        if ell[i] > ell[i + 1]:
            return f"ell not non-decreasing at position {i + 1}: {ell[1:]}"
    inversions = 0
    for i in range(1, k):
        for j in range(i + 1, k):
            if ell[i] > ell[j]:
                inversions += 1
    if inversions != 0:
        return f"n_pi = {inversions} != 0"
    for i in range(1, k):
        want = g_values.get(i + 1)
        if want is None:
            return f"no g value for position {i + 1}"
        if ell[i] < want:
            return f"ell({i + 1}) = {ell[i]} < g({i + 1}) = {want}"
    return None


def check_half_sequence(k: int, coloring: EdgeColoring, seq):
    """None when seq has length ceil(k/2) with distinct vertices, the first
    edge avoids the first vertex's most frequent color, and every vertex from
    the third on sees at least two colors backward; otherwise a reason."""
    seq = list(seq)
    want_len = (k + 1) // 2
    if len(seq) != want_len:
        return f"length {len(seq)} != ceil({k}/2) = {want_len}"
    if len(set(seq)) != len(seq):
        return f"repeated vertex in {seq}"
    if any(not 0 <= v < k for v in seq):
        return f"vertex out of range in {seq}"
    if len(seq) >= 2:
        first = coloring.color_of(seq[0], seq[1])
        if first == _naive_most_frequent(coloring, k, seq[0]):
            return (
                f"first edge ({seq[0]},{seq[1]}) carries the most frequent "
                f"color {first} at {seq[0]}"
            )
    for i in range(2, len(seq)):
        if _distinct_colors_back(coloring, seq, i) < 2:
            return f"vertex {seq[i]} (position {i + 1}) sees fewer than 2 colors"
    return None
