"""Truth-table machinery over the six boolean plant inputs.

A truth table is a 64-bit integer: bit ``a`` holds the value of the function
under assignment ``a``, where bit ``k`` of ``a`` is the value of input ``k``
(input index order: S1, S2, S3, B1, B2, B3).
"""

from __future__ import annotations

from typing import Sequence

N_INPUTS = 6
N_ASSIGNMENTS = 1 << N_INPUTS
FULL_TABLE = (1 << N_ASSIGNMENTS) - 1


def _literal_mask(index: int, negated: bool) -> int:
    mask = 0
    for a in range(N_ASSIGNMENTS):
        if ((a >> index) & 1) != int(negated):
            mask |= 1 << a
    return mask


_POSITIVE = tuple(_literal_mask(i, False) for i in range(N_INPUTS))
_NEGATIVE = tuple(_literal_mask(i, True) for i in range(N_INPUTS))


def literal_table(index: int, negated: bool = False) -> int:
    """Table of a single input literal."""
    return _NEGATIVE[index] if negated else _POSITIVE[index]


def chain_table(chain: Sequence[tuple[int, bool, str]]) -> int:
    """Table of a left-folded literal chain.

    ``chain`` items are (input_index, negated, op) with op in {"AND", "OR"};
    the first item's op is ignored (it is the fold seed). An empty chain is
    constant false.
    """
    if not chain:
        return 0
    idx, neg, _ = chain[0]
    acc = literal_table(idx, neg)
    for idx, neg, op in chain[1:]:
        lit = literal_table(idx, neg)
        acc = (acc & lit) if op == "AND" else (acc | lit)
    return acc


def reduce_chain_indices(chain: Sequence[tuple[int, bool, str]]) -> list[int]:
    """Greedily drop literals that leave the chain's table unchanged.

    Returns the positions (into ``chain``) of the surviving literals, in
    order. Dropping position 0 promotes the next literal to the fold seed,
    whose operator is then ignored. Deterministic: scans left to right and
    restarts after each removal, until a fixpoint.
    """
    target = chain_table(chain)
    kept = list(range(len(chain)))
    while len(kept) > 1:
        for pos in range(len(kept)):
            trial = [chain[i] for i in kept[:pos] + kept[pos + 1:]]
            if chain_table(trial) == target:
                del kept[pos]
                break
        else:
            break
    return kept


def table_of_assignments(values) -> int:
    """Build a table from an iterable of 64 booleans (assignment order)."""
    mask = 0
    for a, v in enumerate(values):
        if v:
            mask |= 1 << a
    return mask


# --- exact two-level minimization --------------------------------------------
#
# Cubes are (value, care) bit pairs over the 6 inputs: input k is fixed to
# bit k of value when bit k of care is set, free otherwise.


def _cube_covers(value: int, care: int, minterm: int) -> bool:
    return (minterm & care) == (value & care)


def _prime_implicants(minterms: list[int]) -> list[tuple[int, int]]:
    level = {(m, (1 << N_INPUTS) - 1) for m in minterms}
    primes: set[tuple[int, int]] = set()
    while level:
        merged: set[tuple[int, int]] = set()
        used: set[tuple[int, int]] = set()
        pairs = sorted(level)
        for i, (va, ca) in enumerate(pairs):
            for vb, cb in pairs[i + 1:]:
                if ca != cb:
                    continue
                diff = (va ^ vb) & ca
                if diff and diff & (diff - 1) == 0:  # exactly one bit
                    merged.add((va & ~diff, ca & ~diff))
                    used.add((va, ca))
                    used.add((vb, cb))
        primes |= level - used
        level = merged
    return sorted(primes)


def _cover_cost(cubes) -> tuple[int, int, tuple]:
    lits = sum(bin(c).count("1") for _, c in cubes)
    return (len(cubes), lits, tuple(sorted(cubes)))


def _minimal_covers(prime_masks: list[int], target: int) -> list[tuple[int, ...]]:
    """All inclusion-minimal-size covers of ``target``.

    Branches on the lowest uncovered minterm, trying every prime that covers
    it; prunes branches that cannot beat the best size found so far. The
    branching structure visits every irredundant cover, so the minimum-size
    ones are all collected.
    """
    best_size = len(prime_masks) + 1
    found: set[frozenset[int]] = set()
    coverers: dict[int, list[int]] = {}
    bit = target
    while bit:
        low = bit & -bit
        coverers[low] = [i for i, m in enumerate(prime_masks) if m & low]
        bit &= bit - 1

    def rec(covered: int, chosen: tuple[int, ...]) -> None:
        nonlocal best_size, found
        if covered & target == target:
            if len(chosen) < best_size:
                best_size = len(chosen)
                found = {frozenset(chosen)}
            elif len(chosen) == best_size:
                found.add(frozenset(chosen))
            return
        if len(chosen) + 1 > best_size:
            return
        # branch on the most constrained uncovered minterm
        uncovered = target & ~covered
        pick, pick_options = None, None
        bit = uncovered
        while bit:
            low = bit & -bit
            options = coverers[low]
            if pick is None or len(options) < len(pick_options):
                pick, pick_options = low, options
                if len(options) == 1:
                    break
            bit &= bit - 1
        for i in pick_options:
            rec(covered | prime_masks[i], chosen + (i,))

    rec(0, ())
    return [tuple(sorted(cover)) for cover in sorted(found, key=sorted)]


def minimize_table(table: int) -> tuple[tuple[tuple[int, bool], ...], ...]:
    """Exact minimal sum-of-products of a table.

    Returns a tuple of product terms; each term is a tuple of
    (input_index, positive) literals sorted by index. Constant false is the
    empty tuple, constant true a single empty term. The cover search over
    prime implicants is exact, so the result is canonical and minimal;
    feasible because the input space is only 2^6.
    """
    if table == 0:
        return ()
    if table == FULL_TABLE:
        return ((),)
    minterms = [a for a in range(N_ASSIGNMENTS) if table >> a & 1]
    primes = _prime_implicants(minterms)
    prime_masks = []
    for value, care in primes:
        mask = 0
        for m in minterms:
            if _cube_covers(value, care, m):
                mask |= 1 << m
        prime_masks.append(mask)

    covers = _minimal_covers(prime_masks, table)
    chosen = min((tuple(primes[i] for i in cover) for cover in covers),
                 key=_cover_cost)

    terms = []
    for value, care in sorted(set(chosen)):
        term = tuple((k, bool(value >> k & 1))
                     for k in range(N_INPUTS) if care >> k & 1)
        terms.append(term)
    return tuple(sorted(terms))
