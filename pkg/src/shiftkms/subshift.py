"""One-sided subshift presentations, word admissibility, counting and entropy.

Four presentations are supported: the full shift, a 0/1 transition-matrix
shift, a shift given by finitely many forbidden factors, and the beta-shift of
a base b > 1.  Each compiles to a deterministic partial automaton whose
defined paths are exactly the admissible words, so counting is a transfer
recursion in exact integers and admissibility is a single run.

Symbols are 1-based (alphabet {1, ..., d}).  Beta-shift digits {0, ..., d-1}
map to symbols by adding 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import spectral
from .beta import beta_expansion_of_one

__all__ = [
    "FullShift",
    "SFT",
    "ForbiddenWords",
    "BetaShift",
    "Automaton",
    "EntropyEstimate",
    "alphabet_size",
    "build_automaton",
    "admissible",
    "count_words",
    "count_words_sequence",
    "topological_entropy",
    "sft_entropy_exact",
    "beta_expansion_of_one",
]


@dataclass(frozen=True)
class FullShift:
    """Full shift on d symbols."""

    alphabet: int

    def __post_init__(self):
        if self.alphabet < 1:
            raise ValueError("alphabet size must be >= 1")


@dataclass(frozen=True, eq=False)
class SFT:
    """Shift of finite type with transition matrix A: word w is admissible iff
    A[w_i, w_{i+1}] = 1 for all consecutive pairs."""

    matrix: np.ndarray

    def __post_init__(self):
        M = spectral.as_zero_one(self.matrix)
        if spectral.has_zero_row(M) or spectral.has_zero_column(M):
            raise ValueError("SFT matrix must have no zero row and no zero column")
        object.__setattr__(self, "matrix", M)


@dataclass(frozen=True)
class ForbiddenWords:
    """Subshift of sequences avoiding every listed word as a factor."""

    alphabet: int
    words: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.alphabet < 1:
            raise ValueError("alphabet size must be >= 1")
        normalized = tuple(tuple(int(s) for s in w) for w in self.words)
        for w in normalized:
            if len(w) == 0:
                raise ValueError("forbidden words must be nonempty")
            if any(s < 1 or s > self.alphabet for s in w):
                raise ValueError(f"forbidden word {w} has symbols outside 1..{self.alphabet}")
        object.__setattr__(self, "words", normalized)


@dataclass(frozen=True)
class BetaShift:
    """Beta-shift: digit sequences admissible for the greedy beta-expansion.

    The base may be a float (used at its exact binary value) or a decimal
    string.  digit_depth caps both the computed expansion of 1 and the word
    lengths the presentation can answer for.
    """

    beta: float | str
    digit_depth: int = 64
    snap_tol: float = 1e-9
    guard_bits: int = 30

    def __post_init__(self):
        b = float(self.beta)
        if b <= 1.0:
            raise ValueError(f"beta must be > 1, got {b}")
        if self.digit_depth < 1:
            raise ValueError("digit_depth must be >= 1")

    @property
    def alphabet(self) -> int:
        return int(math.ceil(float(self.beta)))

    def expansion(self):
        return _cached_expansion(self.beta, self.digit_depth, self.snap_tol, self.guard_bits)


@lru_cache(maxsize=None)
def _cached_expansion(beta, digit_depth, snap_tol, guard_bits):
    return beta_expansion_of_one(beta, digit_depth, snap_tol=snap_tol, guard_bits=guard_bits)


def alphabet_size(spec) -> int:
    if isinstance(spec, FullShift):
        return spec.alphabet
    if isinstance(spec, SFT):
        return int(spec.matrix.shape[0])
    if isinstance(spec, ForbiddenWords):
        return spec.alphabet
    if isinstance(spec, BetaShift):
        return spec.alphabet
    raise TypeError(f"not a subshift presentation: {spec!r}")


class Automaton:
    """Deterministic partial automaton over symbols 1..d.

    A word is in the presented language iff running it from the start state
    stays defined.  Every state has at least one outgoing transition (the
    build trims dead ends), except an optional horizon state in depth-capped
    presentations; max_word_length says how long a run is trustworthy.
    """

    def __init__(self, alphabet, delta, start, max_word_length=None):
        self.alphabet = alphabet
        self.delta = dict(delta)
        self.start = start
        self.max_word_length = max_word_length
        states = {start}
        for (q, _), qn in self.delta.items():
            states.add(q)
            states.add(qn)
        self.states = tuple(sorted(states))
        self._out = {q: {} for q in self.states}
        for (q, c), qn in self.delta.items():
            self._out[q][c] = qn

    @property
    def is_empty(self) -> bool:
        return not self._out[self.start]

    def step(self, state, sym):
        return self._out[state].get(sym)

    def run(self, word, state=None):
        """End state of the word, or None when it leaves the language."""
        self.check_length(len(word))
        q = self.start if state is None else state
        for c in word:
            q = self._out[q].get(c)
            if q is None:
                return None
        return q

    def check_length(self, n):
        if self.max_word_length is not None and n > self.max_word_length:
            raise ValueError(
                f"word length {n} exceeds the presentation depth "
                f"{self.max_word_length}; rebuild with a larger digit_depth"
            )

    def count_vector(self, n):
        """Dict state -> number of admissible length-n words ending there (exact ints)."""
        self.check_length(n)
        counts = {self.start: 1}
        for _ in range(n):
            nxt = {}
            for q, c in counts.items():
                for _, qn in self._out[q].items():
                    nxt[qn] = nxt.get(qn, 0) + c
            counts = nxt
        return counts

    def edges_by_symbol(self):
        by = {c: [] for c in range(1, self.alphabet + 1)}
        for (q, c), qn in self.delta.items():
            by[c].append((q, qn))
        return by

    def reachable_within(self, l):
        """Frozenset of states reachable from the start by words of length <= l."""
        seen = {self.start}
        frontier = {self.start}
        for _ in range(l):
            frontier = {qn for q in frontier for qn in self._out[q].values()} - seen
            if not frontier:
                break
            seen |= frontier
        return frozenset(seen)


def _full_automaton(d):
    delta = {(0, c): 0 for c in range(1, d + 1)}
    return Automaton(d, delta, start=0)


def _sft_automaton(M):
    d = M.shape[0]
    delta = {}
    for c in range(1, d + 1):
        delta[(0, c)] = c
    for i in range(1, d + 1):
        for c in range(1, d + 1):
            if M[i - 1, c - 1]:
                delta[(i, c)] = c
    return Automaton(d, delta, start=0)


def _forbidden_automaton(d, words):
    # Aho-Corasick over the forbidden factors; a node whose suffix set meets
    # the list is dead, and dead-end states are trimmed until every surviving
    # state extends forever.
    goto = [{}]
    terminal = [False]
    for w in words:
        node = 0
        for s in w:
            if s not in goto[node]:
                goto.append({})
                terminal.append(False)
                goto[node][s] = len(goto) - 1
            node = goto[node][s]
        terminal[node] = True
    fail = [0] * len(goto)
    dead = list(terminal)
    queue = list(goto[0].values())
    while queue:
        nxt = []
        for u in queue:
            dead[u] = dead[u] or dead[fail[u]]
            for s, v in goto[u].items():
                f = fail[u]
                while f and s not in goto[f]:
                    f = fail[f]
                fail[v] = goto[f].get(s, 0)
                nxt.append(v)
        queue = nxt
    # complete transitions on live nodes, dropping edges into dead nodes
    delta = {}
    for q in range(len(goto)):
        if dead[q]:
            continue
        for s in range(1, d + 1):
            f = q
            while f and s not in goto[f]:
                f = fail[f]
            target = goto[f].get(s, 0)
            if not dead[target]:
                delta[(q, s)] = target
    # keep only states that are reachable and extend forever
    while True:
        live = {q for (q, _) in delta}
        stale = [e for e, qn in delta.items() if qn not in live]
        if not stale:
            break
        for e in stale:
            del delta[e]
    reachable = {0}
    frontier = [0]
    while frontier:
        q = frontier.pop()
        for s in range(1, d + 1):
            qn = delta.get((q, s))
            if qn is not None and qn not in reachable:
                reachable.add(qn)
                frontier.append(qn)
    delta = {(q, s): qn for (q, s), qn in delta.items() if q in reachable}
    return Automaton(d, delta, start=0)


def _prefix_function(digits):
    pi = [0] * len(digits)
    k = 0
    for i in range(1, len(digits)):
        while k and digits[i] != digits[k]:
            k = pi[k - 1]
        if digits[i] == digits[k]:
            k += 1
        pi[i] = k
    return pi


def _shift_dominated(digits) -> bool:
    # the follower-state reduction is only valid when the expansion of 1
    # dominates all of its shifts lexicographically
    L = len(digits)
    for k in range(1, L):
        for i in range(L - k):
            if digits[k + i] != digits[i]:
                if digits[k + i] > digits[i]:
                    return False
                break
    return True


def _beta_automaton(spec: BetaShift):
    # State j = length of the longest suffix of the word read so far that is a
    # prefix of the quasi-greedy expansion of 1.  Reading digit c from state j:
    # c greater than the next expansion digit is inadmissible, equality
    # advances, and a smaller digit falls back along the prefix function.
    exp = spec.expansion()
    digits = exp.quasi_greedy_digits(spec.digit_depth)
    L = len(digits)
    d = spec.alphabet
    if not _shift_dominated(digits):
        raise ValueError(
            f"computed expansion of 1 for beta={spec.beta} does not dominate its "
            "shifts; the digits are unreliable, raise guard_bits or give beta "
            "more precisely"
        )
    pi = _prefix_function(digits)
    delta = {}
    table = [[0] * d for _ in range(L)]
    for j in range(L):
        for c in range(d):
            if c == digits[j]:
                table[j][c] = j + 1
            elif j == 0:
                table[j][c] = 0
            else:
                table[j][c] = table[pi[j - 1]][c]
            if c <= digits[j]:
                delta[(j, c + 1)] = table[j][c]
    return Automaton(d, delta, start=0, max_word_length=L)


def build_automaton(spec) -> Automaton:
    if isinstance(spec, FullShift):
        return _full_automaton(spec.alphabet)
    if isinstance(spec, SFT):
        return _sft_automaton(spec.matrix)
    if isinstance(spec, ForbiddenWords):
        return _forbidden_automaton(spec.alphabet, spec.words)
    if isinstance(spec, BetaShift):
        return _beta_automaton(spec)
    raise TypeError(f"not a subshift presentation: {spec!r}")


@lru_cache(maxsize=128)
def _cached_automaton_for(spec):
    return build_automaton(spec)


def automaton_for(spec) -> Automaton:
    """Build (and memoize per spec instance) the presenting automaton."""
    return _cached_automaton_for(spec)


def validate_word(word, d) -> tuple[int, ...]:
    w = tuple(int(s) for s in word)
    for s in w:
        if s < 1 or s > d:
            raise ValueError(f"symbol {s} outside alphabet 1..{d}")
    return w


def admissible(word, spec) -> bool:
    """True iff the word occurs in the one-sided subshift.

    The empty word is admissible exactly when the subshift is nonempty.
    """
    aut = automaton_for(spec)
    w = validate_word(word, aut.alphabet)
    if aut.is_empty:
        return False
    return aut.run(w) is not None


def count_words(spec, n: int) -> int:
    """Exact number of admissible words of length n (theta_n); theta_0 = 1
    for a nonempty subshift."""
    if n < 0:
        raise ValueError("n must be >= 0")
    aut = automaton_for(spec)
    if aut.is_empty:
        return 0
    if n == 0:
        return 1
    return sum(aut.count_vector(n).values())


def count_words_sequence(spec, n_max: int) -> list[int]:
    """theta_n for n = 1..n_max in one forward pass."""
    aut = automaton_for(spec)
    if aut.is_empty:
        return [0] * n_max
    aut.check_length(n_max)
    out = []
    counts = {aut.start: 1}
    for _ in range(n_max):
        nxt = {}
        for q, c in counts.items():
            for qn in aut._out[q].values():
                nxt[qn] = nxt.get(qn, 0) + c
        counts = nxt
        out.append(sum(counts.values()))
    return out


@dataclass(frozen=True)
class EntropyEstimate:
    """Word counts and entropy estimate of a presentation.

    theta[i] is the exact count of admissible words of length i+1 and
    log_rates[i] = log(theta[i]) / (i+1).  extrapolated combines the Fekete
    infimum with a trailing log-ratio; exact is filled for presentations whose
    entropy has a closed form (full shift, SFT).
    """

    theta: tuple[int, ...]
    log_rates: tuple[float, ...]
    extrapolated: float
    exact: float | None
    method: str


def _extrapolate(theta, log_rates) -> float:
    fekete = min(log_rates)
    n = len(theta)
    lag = max(w for w in (12, 6, 4, 2, 1) if w <= n - 1)
    ratio = (math.log(theta[n - 1]) - math.log(theta[n - 1 - lag])) / lag
    return min(fekete, ratio)


def topological_entropy(spec, n_max: int) -> EntropyEstimate:
    """Entropy estimate from word counts up to length n_max (n_max >= 2).

    Raises ValueError for an empty subshift (theta_1 = 0).
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    theta = count_words_sequence(spec, n_max)
    if theta[0] == 0:
        raise ValueError("subshift is empty (theta_1 = 0)")
    log_rates = tuple(math.log(t) / n for n, t in enumerate(theta, start=1))
    extrapolated = _extrapolate(theta, log_rates)
    exact = None
    if isinstance(spec, FullShift):
        exact = math.log(spec.alphabet)
        method = "full"
    elif isinstance(spec, SFT):
        exact = sft_entropy_exact(spec.matrix)
        method = "transfer-matrix"
    elif isinstance(spec, ForbiddenWords):
        method = "forbidden-factor-automaton"
    else:
        method = "beta-follower-automaton"
    return EntropyEstimate(
        theta=tuple(theta),
        log_rates=log_rates,
        extrapolated=extrapolated,
        exact=exact,
        method=method,
    )


def sft_entropy_exact(A) -> float:
    """log of the spectral radius of the transition matrix."""
    M = spectral.as_zero_one(A)
    if spectral.has_zero_row(M) or spectral.has_zero_column(M):
        raise ValueError("SFT matrix must have no zero row and no zero column")
    return math.log(spectral.spectral_radius(M))
