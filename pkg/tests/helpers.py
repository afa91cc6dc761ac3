"""Shared fixtures-in-spirit: reference colourings and independent oracles.

The oracles here deliberately re-derive everything from first principles
(direct enumeration over cores, labelled cycle walks) so the engine is never
checked against itself.
"""

from collections import Counter
from itertools import combinations, permutations, product

from rainbowsets.engine import _splitmix64
from rainbowsets.hypergraph import Colouring, ColouringSpec
from rainbowsets.keys import canonical_key


def injective_colouring(k=2, h=1, declared=1) -> Colouring:
    """Every edge its own colour: the edge tuple itself is the value."""
    return Colouring(ColouringSpec(k, h, declared), lambda e: e, "injective")


def constant_colouring(k=2, h=1, declared=1) -> Colouring:
    return Colouring(ColouringSpec(k, h, declared), lambda e: 0, "constant")


def random_colouring(seed: int, k: int, h: int, palette: int, declared=1) -> Colouring:
    """Seeded colouring that is a pure function of the edge contents.

    Stable under ground-set growth, so restriction arguments hold.
    """

    def evaluator(edge):
        x = seed & ((1 << 64) - 1)
        for v in sorted(edge):
            x = _splitmix64(x ^ (v + 0x9E3779B97F4A7C15))
        return x % palette

    return Colouring(ColouringSpec(k, h, declared), evaluator, f"random{seed}")


def brute_force_max_petals(colouring: Colouring, n: int, h: int) -> int:
    """Independent sunflower oracle: scan every h-core against every edge."""
    k = colouring.spec.k
    best = 0
    for core in combinations(range(n), h):
        core_set = set(core)
        counts: Counter = Counter()
        for e in combinations(range(n), k):
            if core_set <= set(e):
                counts[canonical_key(colouring.evaluator(e))] += 1
        if counts:
            best = max(best, max(counts.values()))
    return best


def brute_force_short_cycles(hypergraph, max_len: int) -> dict[int, int]:
    """Independent Berge-cycle count: all labelled tuples divided by 2L."""
    edge_sets = [set(e.vertices) for e in hypergraph.edges]
    m = len(edge_sets)
    counts = {length: 0 for length in range(2, max_len + 1)}
    for i, j in combinations(range(m), 2):
        if len(edge_sets[i] & edge_sets[j]) >= 2:
            counts[2] += 1
    for length in range(3, max_len + 1):
        total = 0
        for seq in permutations(range(m), length):
            links = [edge_sets[a] & edge_sets[b] for a, b in zip(seq, seq[1:] + seq[:1])]
            if any(not link for link in links):
                continue
            for choice in product(*links):
                if len(set(choice)) == length:
                    total += 1
        assert total % (2 * length) == 0
        counts[length] = total // (2 * length)
    return counts


def all_subsets(n: int):
    """Every subset of range(n) as a sorted tuple."""
    for mask in range(1 << n):
        yield tuple(i for i in range(n) if mask >> i & 1)
