"""Past-equivalence classes, cover dimensions, sofic detection, entropy bracket.

Two admissible words of length m are l-past equivalent when the same words of
length <= l can precede them.  On a presenting automaton the predecessor set
of w is determined by which states can read w, restricted to states reachable
from the start in <= l steps; class counting therefore reduces to a backward
subset iteration and never enumerates words unless the words themselves are
requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .subshift import Automaton, admissible, automaton_for, topological_entropy, validate_word


@dataclass(frozen=True)
class PastClass:
    representative: tuple[int, ...]
    words: tuple[tuple[int, ...], ...]
    predecessors: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class PastPartition:
    """Partition of the admissible words of length `depth` by l-past equivalence.

    stabilized is True when the class count agrees with the one computed at
    depth-1; a non-stabilized count is only a lower bound for the cover
    dimension.
    """

    l: int
    depth: int
    classes: tuple[PastClass, ...]
    class_count: int
    stabilized: bool


@dataclass(frozen=True)
class DimQ:
    count: int
    stabilized: bool
    l: int
    depth: int


@dataclass(frozen=True)
class SoficReport:
    sofic_detected: bool
    counts: tuple[int, ...]
    stabilized: tuple[bool, ...]
    l_max: int
    depth: int
    window: int


@dataclass(frozen=True)
class BracketReport:
    """Entropy bracket [lower, upper] for the noncommutative shift entropy.

    lower is the estimated topological entropy; the correction sequence is
    2 log(dim Q_n)/n.  A detected-sofic input has bounded cover dimensions, so
    the correction limit vanishes and the bracket closes.
    """

    lower: float
    upper: float
    correction_sequence: tuple[float, ...]
    dims: tuple[int, ...]
    dims_stabilized: tuple[bool, ...]
    sofic_detected: bool
    n_max: int
    depth: int

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _readable_from(aut: Automaton, state, word) -> bool:
    q = state
    for c in word:
        q = aut.step(q, c)
        if q is None:
            return False
    return True


def _admissible_words(aut: Automaton, m: int) -> list[tuple[int, ...]]:
    if aut.is_empty:
        return []
    if m == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def rec(prefix, q):
        if len(prefix) == m:
            out.append(prefix)
            return
        for c in range(1, aut.alphabet + 1):
            qn = aut.step(q, c)
            if qn is not None:
                rec(prefix + (c,), qn)

    rec((), aut.start)
    return out


def _admissible_prefixes_upto(aut: Automaton, l: int) -> list[tuple[tuple[int, ...], object]]:
    """All admissible words of length <= l with their end states, shortlex order."""
    out = [((), aut.start)] if not aut.is_empty else []
    layer = [((), aut.start)] if not aut.is_empty else []
    for _ in range(l):
        nxt = []
        for mu, q in layer:
            for c in range(1, aut.alphabet + 1):
                qn = aut.step(q, c)
                if qn is not None:
                    nxt.append((mu + (c,), qn))
        out.extend(nxt)
        layer = nxt
    return out


def predecessor_set(word, l: int, spec) -> list[tuple[int, ...]]:
    """All admissible mu with |mu| <= l and mu+word admissible, shortlex sorted.

    Includes the empty word.  The word itself must be nonempty and admissible.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    aut = automaton_for(spec)
    w = validate_word(word, aut.alphabet)
    if len(w) < 1:
        raise ValueError("word must be nonempty")
    aut.check_length(l + len(w))
    if not admissible(w, spec):
        raise ValueError(f"word {w} is not admissible")
    readable = {q for q in aut.states if _readable_from(aut, q, w)}
    return [mu for mu, q in _admissible_prefixes_upto(aut, l) if q in readable]


def _class_key(aut: Automaton, word, restriction) -> frozenset:
    return frozenset(q for q in restriction if _readable_from(aut, q, word))


def omega_l(spec, l: int, depth: int) -> PastPartition:
    """Group the admissible words of length `depth` by l-past equivalence.

    Classes are ordered by their lexicographically smallest member; each class
    carries the common predecessor set as a shortlex-sorted word list.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    if depth < max(l, 1):
        raise ValueError("depth must be >= max(l, 1)")
    aut = automaton_for(spec)
    aut.check_length(l + depth)
    words = _admissible_words(aut, depth)
    if not words:
        raise ValueError(f"no admissible words of length {depth}")
    R = aut.reachable_within(l)
    groups: dict[frozenset, list[tuple[int, ...]]] = {}
    for w in words:
        groups.setdefault(_class_key(aut, w, R), []).append(w)
    prefixes = _admissible_prefixes_upto(aut, l)
    classes = []
    for key, members in groups.items():
        preds = tuple(mu for mu, q in prefixes if q in key)
        classes.append(
            PastClass(representative=members[0], words=tuple(members), predecessors=preds)
        )
    classes.sort(key=lambda c: c.representative)
    prev_count = None
    if depth - 1 >= max(l, 1):
        prev_words = _admissible_words(aut, depth - 1)
        prev_count = len({_class_key(aut, w, R) for w in prev_words})
    return PastPartition(
        l=l,
        depth=depth,
        classes=tuple(classes),
        class_count=len(classes),
        stabilized=prev_count == len(classes),
    )


def _subset_family(aut: Automaton, depth: int) -> list[set[frozenset]]:
    """family[m] = set of readability subsets {q : w readable from q} over length-m words."""
    by_sym = aut.edges_by_symbol()
    family = [{frozenset(aut.states)}]
    current = family[0]
    for _ in range(depth):
        nxt = set()
        for B in current:
            for edges in by_sym.values():
                pre = frozenset(q for (q, qn) in edges if qn in B)
                if pre:
                    nxt.add(pre)
        family.append(nxt)
        current = nxt
    return family


def _count_at(aut: Automaton, subsets: set[frozenset], restriction: frozenset) -> int:
    return len({B & restriction for B in subsets if aut.start in B})


def dim_q(spec, n: int, depth: int) -> DimQ:
    """Cover dimension dim(Q_n) = number of n-past classes at the given proxy depth.

    A non-stabilized count must be treated as a lower bound.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if depth < max(n, 1):
        raise ValueError("depth must be >= max(n, 1)")
    aut = automaton_for(spec)
    aut.check_length(n + depth)
    family = _subset_family(aut, depth)
    if not family[depth]:
        raise ValueError(f"no admissible words of length {depth}")
    R = aut.reachable_within(n)
    count = _count_at(aut, family[depth], R)
    stabilized = depth - 1 >= max(n, 1) and _count_at(aut, family[depth - 1], R) == count
    return DimQ(count=count, stabilized=stabilized, l=n, depth=depth)


def sofic_check(spec, l_max: int, depth: int | None = None, window: int = 3) -> SoficReport:
    """Detect soficity from stabilized, eventually constant class counts.

    True is reliable at desk scale for the supported presentations; False only
    means not detected within l_max.
    """
    if l_max < 2:
        raise ValueError("l_max must be >= 2")
    if depth is None:
        depth = l_max + 4
    if depth < max(l_max, 2):
        raise ValueError("depth must be >= max(l_max, 2)")
    aut = automaton_for(spec)
    aut.check_length(l_max + depth)
    family = _subset_family(aut, depth)
    if not family[depth]:
        raise ValueError(f"no admissible words of length {depth}")
    counts, stab = [], []
    for l in range(1, l_max + 1):
        R = aut.reachable_within(l)
        c = _count_at(aut, family[depth], R)
        counts.append(c)
        stab.append(_count_at(aut, family[depth - 1], R) == c)
    detected = (
        len(counts) >= window
        and len(set(counts[-window:])) == 1
        and all(stab[-window:])
    )
    return SoficReport(
        sofic_detected=detected,
        counts=tuple(counts),
        stabilized=tuple(stab),
        l_max=l_max,
        depth=depth,
        window=window,
    )


def entropy_bracket(spec, n_max: int, depth: int | None = None, window: int = 5) -> BracketReport:
    """Bracket the noncommutative shift entropy between the subshift entropy and
    the dimension-corrected upper bound.

    upper = lower + min of 2 log(dim Q_n)/n over the trailing window, except
    that a detected-sofic input closes the bracket exactly.
    """
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    if depth is None:
        depth = n_max + 10
    if depth < n_max:
        raise ValueError("depth must be >= n_max")
    aut = automaton_for(spec)
    aut.check_length(n_max + depth)
    lower = topological_entropy(spec, n_max).extrapolated
    family = _subset_family(aut, depth)
    if not family[depth]:
        raise ValueError(f"no admissible words of length {depth}")
    dims, stab = [], []
    for n in range(1, n_max + 1):
        R = aut.reachable_within(n)
        c = _count_at(aut, family[depth], R)
        dims.append(c)
        stab.append(_count_at(aut, family[depth - 1], R) == c)
    corrections = tuple(2.0 * math.log(dims[n - 1]) / n for n in range(1, n_max + 1))
    sofic = len(dims) >= 3 and len(set(dims[-3:])) == 1 and all(stab[-3:])
    if sofic:
        upper = lower
    else:
        upper = lower + min(corrections[-window:])
    return BracketReport(
        lower=lower,
        upper=upper,
        correction_sequence=corrections,
        dims=tuple(dims),
        dims_stabilized=tuple(stab),
        sofic_detected=sofic,
        n_max=n_max,
        depth=depth,
    )
