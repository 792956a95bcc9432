"""Exact minimum hitting set over bitmask families (branch and bound)."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _minimal(members):
    """Drop duplicates and supersets; a superset is hit whenever its subset is."""
    out = []
    for m in sorted(set(members), key=lambda x: (_popcount(x), x)):
        if not any(o & m == o for o in out):
            out.append(m)
    return out


def _packing_bound(members):
    """Size of a greedy family of pairwise disjoint members."""
    used = 0
    count = 0
    for m in sorted(members, key=lambda x: (_popcount(x), x)):
        if not m & used:
            used |= m
            count += 1
    return count


def _greedy(members):
    chosen = 0
    left = list(members)
    while left:
        e = _best_element(left)
        chosen |= 1 << e
        left = [m for m in left if not m >> e & 1]
    return chosen


def _best_element(members):
    counts = {}
    for m in members:
        x = m
        while x:
            low = x & -x
            e = low.bit_length() - 1
            counts[e] = counts.get(e, 0) + 1
            x ^= low
    return min(counts, key=lambda e: (-counts[e], e))


def min_hitting_set(members) -> tuple:
    """Return ``(size, mask)`` of a minimum set meeting every member.

    Branches on the element covering the most members (take it, or delete it
    everywhere); prunes with a disjoint-packing lower bound.
    """
    members = list(members)
    if not members:
        return 0, 0
    if any(m == 0 for m in members):
        raise ValueError("an empty member cannot be hit")
    members = _minimal(members)
    best = _greedy(members)
    best_size = _popcount(best)

    def rec(ms, chosen, k):
        nonlocal best, best_size
        if not ms:
            if k < best_size:
                best, best_size = chosen, k
            return
        if k + _packing_bound(ms) >= best_size:
            return
        e = _best_element(ms)
        bit = 1 << e
        rec([m for m in ms if not m & bit], chosen | bit, k + 1)
        reduced = [m & ~bit for m in ms]
        if all(reduced):
            rec(_minimal(reduced), chosen, k)

    rec(members, 0, 0)
    return best_size, best


def hitting_number_bruteforce(members, universe: int) -> int:
    """Smallest hitting set by enumerating subsets of ``universe`` bits (test oracle)."""
    from itertools import combinations

    members = list(members)
    if not members:
        return 0
    for k in range(universe + 1):
        for combo in combinations(range(universe), k):
            mask = 0
            for e in combo:
                mask |= 1 << e
            if all(m & mask for m in members):
                return k
    raise ValueError("an empty member cannot be hit")
