"""Flooded-subtree size analysis for uniform recursive trees.

A tree of N nodes grows by attaching node i (2..N) to a parent drawn
uniformly from 1..i-1; these trees model the routing DODAG. The module gives
the exact distribution of the descendant count of node k, the mixture over a
uniformly chosen node, tail probabilities, and Monte-Carlo counterparts.

The closed form used here, with (n)^(j) the rising and (n)_(j) the falling
factorial power,

    P(D_N(k) = j) = (k-1) * (N-k-j+1)^(j) / ((N-j-1) * (N-1)_(j)),

normalizes to 1 and matches exhaustive enumeration of all (N-1)! attachment
histories; a rising-factorial denominator does not (checked in tests).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

Pmf = dict[int, Fraction] | dict[int, float]


def rising_factorial(n: int, j: int) -> int:
    """n * (n+1) * ... * (n+j-1); empty product (j=0) is 1."""
    out = 1
    for i in range(j):
        out *= n + i
    return out


def falling_factorial(n: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= n - i
    return out


def descendants_pmf(N: int, k: int, exact: bool = True) -> Pmf:
    """Distribution of the descendant count of node k in an N-node tree.

    Valid for 2 <= k <= N; the root (k=1) deterministically has N-1
    descendants and is excluded from the formula. Computed by the stable
    ratio recurrence P(j) = P(j-1) * (N-k-j+1)/(N-j-1), P(0) = (k-1)/(N-1).
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if not 2 <= k <= N:
        raise ValueError(f"node index k must be in 2..{N}, got {k} "
                         "(the root is excluded; its descendant count is N-1)")
    one = Fraction(1) if exact else 1.0
    p = one * (k - 1) / (N - 1)
    pmf = {0: p}
    for j in range(1, N - k + 1):
        p = p * (N - k - j + 1) / (N - j - 1)
        pmf[j] = p
    return pmf


def subtree_size_distribution(N: int, include_root: bool = True,
                              exact: bool = True) -> Pmf:
    """Mixture (1/N) * sum_k descendants_pmf(N, k) over a uniform node choice.

    include_root adds the root's deterministic point mass at j = N-1 with
    weight 1/N; otherwise the mixture renormalizes over k = 2..N.
    """
    one = Fraction(1) if exact else 1.0
    weight = one / N if include_root else one / (N - 1)
    mix: dict[int, Fraction | float] = {}
    for k in range(2, N + 1):
        for j, p in descendants_pmf(N, k, exact=exact).items():
            mix[j] = mix.get(j, 0 * one) + weight * p
    if include_root:
        mix[N - 1] = mix.get(N - 1, 0 * one) + one / N
    return dict(sorted(mix.items()))


def tail_probability(pmf: Pmf, threshold: int) -> Fraction | float:
    """P(J > threshold) = sum of pmf mass strictly above the threshold."""
    return sum(p for j, p in pmf.items() if j > threshold)


def node_inclusive(pmf: Pmf) -> Pmf:
    """Shift descendant counts to subtree sizes (the node itself included)."""
    return {j + 1: p for j, p in pmf.items()}


def sample_urt(N: int, rng) -> list[int]:
    """One uniform recursive tree as a parent array; parents[i] is node i+2's
    parent (nodes numbered 1..N, node 1 is the root)."""
    return [rng.randint(1, i - 1) for i in range(2, N + 1)]


def descendant_counts(parents: list[int]) -> list[int]:
    """Descendant count per node (1..N) from a parent array."""
    n = len(parents) + 1
    sizes = [1] * (n + 1)
    for i in range(n, 1, -1):
        sizes[parents[i - 2]] += sizes[i]
    return [sizes[i] - 1 for i in range(1, n + 1)]


def monte_carlo_distribution(N: int, iterations: int, seed: int = 1,
                             include_root: bool = True) -> dict[int, float]:
    """Empirical descendant-count distribution of a uniformly random node.

    Vectorized over iterations: each iteration grows one tree and contributes
    its full per-node histogram (the exact expectation over the node choice).
    """
    gen = np.random.Generator(np.random.PCG64(seed))
    # parents[:, i] is the parent (1-based) of node i+2 in every iteration
    parents = np.empty((iterations, N - 1), dtype=np.int64)
    for i in range(N - 1):
        parents[:, i] = gen.integers(1, i + 2, size=iterations)
    sizes = np.ones((iterations, N + 1), dtype=np.int64)
    rows = np.arange(iterations)
    for i in range(N, 1, -1):
        np.add.at(sizes, (rows, parents[:, i - 2]), sizes[:, i])
    desc = sizes[:, 1:] - 1
    lo = 1 if not include_root else 0
    hist = np.bincount(desc[:, lo:].ravel(), minlength=N)
    total = hist.sum()
    return {j: hist[j] / total for j in range(N) if hist[j]}


def total_variation(p: Pmf, q: Pmf) -> float:
    support = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(j, 0.0)) - float(q.get(j, 0.0)))
                     for j in support)


def brute_force_descendants_pmf(N: int) -> dict[int, dict[int, Fraction]]:
    """Exhaustive oracle: enumerate all (N-1)! attachment histories.

    Returns, for every k in 2..N, the exact descendant-count pmf. Only
    tractable for small N (the acceptance bound is N <= 8).
    """
    import itertools

    counts: dict[int, dict[int, int]] = {k: {} for k in range(2, N + 1)}
    total = 0
    for choices in itertools.product(*[range(1, i) for i in range(2, N + 1)]):
        total += 1
        desc = descendant_counts(list(choices))
        for k in range(2, N + 1):
            d = desc[k - 1]
            counts[k][d] = counts[k].get(d, 0) + 1
    return {k: {j: Fraction(c, total) for j, c in sorted(v.items())}
            for k, v in counts.items()}
