"""Independent brute-force oracles shared by the test modules.

Everything here recomputes expected values by direct enumeration, never
through the code paths under test.
"""

from fractions import Fraction
from itertools import product
from math import comb

from paraferm.fusion_identify import (
    enumerate_simples,
    enumerate_w_simples,
    label_topweight,
    para_current,
    para_normalize,
    w_current,
    w_label,
)

Q = Fraction


def colored_partition_count(n: int, colors: int) -> int:
    """Multisets of (part >= 1, color) pairs summing to n."""

    def count(n, max_part):
        if n == 0:
            return 1
        if max_part == 0:
            return 0
        total = 0
        m = 0
        while m * max_part <= n:
            ways = comb(m + colors - 1, colors - 1) if m else 1
            total += ways * count(n - m * max_part, max_part - 1)
            m += 1
        return total

    return count(n, n)


def colored_partitions_table(n: int, colors: int) -> int:
    """Same count via the generating-function recurrence (cheap for large n)."""
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for _ in range(colors):
            for total in range(part, n + 1):
                table[total] += table[total - part]
    return table[n]


def free_generation_count(n: int, k: int) -> int:
    """Monomials of weight n in commuting variables with min(d,k)-1 variables
    in each weight d >= 2 (free generators of weights 2..k with all their
    weight-raising derivatives)."""
    weights = []
    for d in range(2, n + 1):
        weights.extend([d] * (min(d, k) - 1))

    def count(n, idx):
        if n == 0:
            return 1
        if idx == len(weights):
            return 0
        total = 0
        m = 0
        while m * weights[idx] <= n:
            total += count(n - m * weights[idx], idx + 1)
            m += 1
        return total

    return count(n, 0)


def brute_force_identifications(k: int) -> list[dict]:
    """Enumerate every weight-preserving bijection between the two label
    families that maps currents to currents multiplicatively and commutes
    with the current action; no minimality or integrality arguments."""
    paras = enumerate_simples(k)
    ws = enumerate_w_simples(k)
    w_by_weight: dict[Fraction, list] = {}
    for w in ws:
        w_by_weight.setdefault(label_topweight(w), []).append(w)

    units = [u for u in range(1, k) if Q(u * (k - u), k) == Q(k - 1, k)]
    found = []
    stages = list(range(1, k // 2 + 1))
    stage_cands = {
        p: w_by_weight.get(label_topweight(para_normalize(k, p, 0)), [])
        for p in stages
    }
    for u in units:
        for choice in product(*(stage_cands[p] for p in stages)):
            mapping = {}
            ok = True
            for j in range(k):
                mapping[para_current(k, j)] = w_current(k, u * j)
            for p, img in zip(stages, choice):
                for j in range(k):
                    para = para_normalize(k, p, j)
                    w = w_label(k, img.a + u * j, img.b + u * j)
                    if mapping.setdefault(para, w) != w:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            if set(mapping) != set(paras):
                continue
            if len(set(mapping.values())) != len(paras):
                continue
            if any(
                label_topweight(p) != label_topweight(w) for p, w in mapping.items()
            ):
                continue
            if mapping not in found:
                found.append(mapping)
    return found
