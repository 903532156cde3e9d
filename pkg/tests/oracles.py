"""Independent brute-force oracles for the test suite.

Nothing here goes through the package's automata or power iterations: word
admissibility is checked straight from the definitions, counting enumerates,
matrix powers are exact, and the spectral-radius oracle uses repeated
squaring.  Agreement between these and the fast implementations is what the
oracle-equivalence tests assert.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from shiftkms import BetaShift, ForbiddenWords, FullShift, SFT


def sft_admissible_direct(word, matrix) -> bool:
    M = np.asarray(matrix)
    return all(M[a - 1, b - 1] for a, b in zip(word, word[1:]))


def forbidden_admissible_direct(word, forbidden) -> bool:
    w = tuple(word)
    for f in forbidden:
        k = len(f)
        if any(w[i : i + k] == tuple(f) for i in range(len(w) - k + 1)):
            return False
    return True


def beta_admissible_direct(word, dstar_digits) -> bool:
    """Lexicographic criterion: every suffix, in digits, is <= the expansion
    of 1 position by position until a strict inequality decides."""
    digits = [s - 1 for s in word]
    for start in range(len(digits)):
        suffix = digits[start:]
        for i, c in enumerate(suffix):
            if c > dstar_digits[i]:
                return False
            if c < dstar_digits[i]:
                break
    return True


def admissible_direct(word, spec) -> bool:
    """Definition-level admissibility check.

    For forbidden-word presentations this is the avoid-the-list test, which
    matches language membership only when every avoiding word extends forever
    (true for the lists used in these tests); forbidden_occurs_brute is the
    exact oracle for arbitrary lists.
    """
    if isinstance(spec, FullShift):
        return True
    if isinstance(spec, SFT):
        return sft_admissible_direct(word, spec.matrix)
    if isinstance(spec, ForbiddenWords):
        return forbidden_admissible_direct(word, spec.words)
    if isinstance(spec, BetaShift):
        dstar = spec.expansion().quasi_greedy_digits(spec.digit_depth)
        return beta_admissible_direct(word, dstar)
    raise TypeError(spec)


def forbidden_occurs_brute(word, forbidden, d, horizon=None) -> bool:
    """Exact language membership for a forbidden-factor shift: the word must
    avoid the list and extend forward past every dead end.  A horizon of one
    more than the total length of the list bounds the search."""
    w = tuple(word)
    if not forbidden_admissible_direct(w, forbidden):
        return False
    if horizon is None:
        horizon = sum(len(f) for f in forbidden) + 1

    def extends(prefix, remaining):
        if remaining == 0:
            return True
        return any(
            forbidden_admissible_direct(prefix + (c,), forbidden)
            and extends(prefix + (c,), remaining - 1)
            for c in range(1, d + 1)
        )

    return extends(w, horizon)


def enumerate_words(spec, n, d=None):
    """All admissible words of length n by filtering the full product."""
    if d is None:
        from shiftkms.subshift import alphabet_size

        d = alphabet_size(spec)
    return [w for w in itertools.product(range(1, d + 1), repeat=n) if admissible_direct(w, spec)]


def count_words_brute(spec, n) -> int:
    return len(enumerate_words(spec, n))


def predecessor_set_brute(word, l, spec):
    """Exhaustive predecessor search straight from the definitions."""
    from shiftkms.subshift import alphabet_size

    d = alphabet_size(spec)
    out = []
    for k in range(l + 1):
        for mu in itertools.product(range(1, d + 1), repeat=k):
            if admissible_direct(mu, spec) and admissible_direct(mu + tuple(word), spec):
                out.append(mu)
    return out


def past_classes_brute(spec, l, depth) -> int:
    """Number of l-past classes of depth-length words, by raw set comparison."""
    words = enumerate_words(spec, depth)
    keys = {tuple(predecessor_set_brute(w, l, spec)) for w in words}
    return len(keys)


def reachability_irreducible(matrix) -> bool:
    """Irreducibility via boolean reachability powers (independent of Tarjan)."""
    M = np.asarray(matrix) > 0
    d = M.shape[0]
    if d == 1:
        return bool(M[0, 0])
    reach = M.copy()
    acc = M.copy()
    for _ in range(d - 1):
        reach = reach @ M
        acc |= reach
    return bool(acc.all())


def period_brute(matrix) -> int:
    """gcd of closed-walk lengths at node 0 via exact boolean powers."""
    M = np.asarray(matrix) > 0
    d = M.shape[0]
    g = 0
    P = np.eye(d, dtype=bool)
    for n in range(1, 3 * d * d + 1):
        P = (P.astype(int) @ M.astype(int)) > 0
        if P[0, 0]:
            g = math.gcd(g, n)
    return g if g else 1


def matrix_power_exact(matrix, r):
    """A^r over Python integers."""
    M = [[int(x) for x in row] for row in np.asarray(matrix)]
    d = len(M)
    out = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    for _ in range(r):
        out = [
            [sum(out[i][k] * M[k][j] for k in range(d)) for j in range(d)]
            for i in range(d)
        ]
    return out


def spectral_radius_squaring(matrix, doublings=40) -> float:
    """r(A) as the 2^k-th root of the norm of A^(2^k), with rescaling."""
    M = np.asarray(matrix, dtype=float)
    log_scale = 0.0
    power = 1
    for _ in range(doublings):
        norm = float(np.abs(M).sum())
        M = (M / norm) @ (M / norm)
        log_scale = 2.0 * (log_scale + math.log(norm))
        power *= 2
        log_scale_root = (log_scale + math.log(float(np.abs(M).sum()))) / power
    return math.exp(log_scale_root)


def greedy_digits_fraction(p, q, n) -> list[int]:
    """Greedy expansion digits of 1 in a rational base p/q, exactly."""
    b = Fraction(p, q)
    x = Fraction(1)
    out = []
    for _ in range(n):
        y = b * x
        d = y.numerator // y.denominator
        out.append(d)
        x = y - d
        if x == 0:
            break
    return out


def random_irreducible_zero_one(rng, d, density=0.5):
    """Seeded random irreducible 0/1 matrix with no zero row or column."""
    while True:
        M = (rng.random((d, d)) < density).astype(int)
        if M.sum() == 0:
            continue
        if (M.sum(axis=0) == 0).any() or (M.sum(axis=1) == 0).any():
            continue
        if reachability_irreducible(M):
            return M
