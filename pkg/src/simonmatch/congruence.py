"""Simon k-congruence: exhaustive subsequence-set oracles, a polynomial
distinguisher DP, and the congruence-class automaton.

Two words are k-congruent when they have the same subsequences up to length
k.  ``subseq_set`` is the desk-scale ground truth; ``shortest_distinguisher``
is the polynomial test everything else builds on (u ~_k v iff the shortest
distinguishing length exceeds k).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import INF, Alphabet, Word
from .errors import CapExceeded

_EMPTY = np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class SubseqSet:
    """The exact set of subsequences of a word up to length k.

    Members are letter tuples; the set is downward closed and always
    contains the empty tuple.
    """

    k: int
    members: frozenset[tuple[int, ...]]
    alphabet: Alphabet

    def __contains__(self, item):
        if isinstance(item, Word):
            item = item.letters
        return tuple(item) in self.members

    def words(self) -> list[Word]:
        return [Word(t, self.alphabet) for t in sorted(self.members, key=lambda t: (len(t), t))]

    def same_members(self, other: "SubseqSet") -> bool:
        return self.members == other.members


def subseq_letter_sets(letters: tuple[int, ...], k: int) -> frozenset[tuple[int, ...]]:
    """Subsequences of a letter tuple up to length k, as a set of tuples."""
    members = {()}
    for a in letters:
        members |= {s + (a,) for s in members if len(s) < k}
    return frozenset(members)


def subseq_set(w: Word, k: int, max_word_len: int = 16, max_k: int = 6) -> SubseqSet:
    """Exhaustive subsequence set; exponential, capped to stay at desk scale."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if len(w) > max_word_len:
        raise CapExceeded("subseq-set word length", max_word_len, len(w), "--word-cap")
    if k > max_k:
        raise CapExceeded("subseq-set k", max_k, k, "--k-cap")
    return SubseqSet(k, subseq_letter_sets(w.letters, k), w.alphabet)


def shortest_distinguisher(u: Word, v: Word):
    """Minimum length of a word that is a subsequence of exactly one of u, v.

    Returns INF when no length distinguishes them (u ~_k v for every k).
    The contract linking the two views: u ~_k v iff the result exceeds k.
    """
    if u.alphabet.size != v.alphabet.size:
        raise ValueError("words must share an alphabet")
    d = int(kernels.distinguisher(u.arr, v.arr, u.alphabet.size))
    return d if d < kernels.NO_DISTINGUISHER else INF


def simon_congruent(u: Word, v: Word, k: int) -> bool:
    """True iff u and v have identical subsequence sets up to length k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return shortest_distinguisher(u, v) > k


def _congruent_tuples(a: tuple[int, ...], b: tuple[int, ...], sigma: int, k: int) -> bool:
    ua = np.array(a, dtype=np.int64) if a else _EMPTY
    ub = np.array(b, dtype=np.int64) if b else _EMPTY
    return int(kernels.distinguisher(ua, ub, sigma)) > k


@dataclass(frozen=True)
class ClassAutomaton:
    """Deterministic automaton whose states are the k-congruence classes.

    State 0 is the class of the empty word; ``target`` marks the class of the
    reference word.  Walking any word from state 0 lands in its class, so the
    accepted language (states equal to target) is exactly the words
    k-congruent to the reference.
    """

    alphabet: Alphabet
    k: int
    representatives: tuple[tuple[int, ...], ...]
    transitions: tuple[tuple[int, ...], ...]  # state x (letter-1) -> state
    target: int

    @property
    def initial(self) -> int:
        return 0

    @property
    def num_states(self) -> int:
        return len(self.representatives)

    def representative(self, state: int) -> Word:
        return Word(self.representatives[state], self.alphabet)

    def class_of(self, letters) -> int:
        if isinstance(letters, Word):
            letters = letters.letters
        state = 0
        for a in letters:
            state = self.transitions[state][a - 1]
        return state

    def accepts(self, w: Word) -> bool:
        return self.class_of(w) == self.target

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "alphabet": "".join(self.alphabet.render_chars),
            "initial": 0,
            "target": self.target,
            "states": [
                {
                    "id": i,
                    "representative": self.alphabet.render(rep),
                    "is_target": i == self.target,
                }
                for i, rep in enumerate(self.representatives)
            ],
            "transitions": [list(row) for row in self.transitions],
        }


def class_automaton(w: Word, k: int, state_cap: int = 100_000) -> ClassAutomaton:
    """Build the k-congruence class automaton by BFS from the empty word.

    New words are deduplicated against existing representatives with pairwise
    congruence tests, bucketed by two cheap class invariants (alphabet and
    arch count capped at k).  Letters are explored in ascending order, so the
    representative of each class is the first word discovered for it.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    sigma = w.alphabet.size
    alphabet = w.alphabet

    def bucket_key(letters: tuple[int, ...]):
        arr = np.array(letters, dtype=np.int64) if letters else _EMPTY
        count, _ = kernels.arch_scan(arr, sigma)
        return frozenset(letters), min(int(count), k)

    reps: list[tuple[int, ...]] = [()]
    buckets: dict[object, list[int]] = {bucket_key(()): [0]}
    transitions: list[list[int]] = [[-1] * sigma]
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for a in range(1, sigma + 1):
            cand = reps[s] + (a,)
            key = bucket_key(cand)
            hit = -1
            for t in buckets.get(key, ()):
                if _congruent_tuples(cand, reps[t], sigma, k):
                    hit = t
                    break
            if hit < 0:
                if len(reps) >= state_cap:
                    raise CapExceeded("class-automaton states", state_cap, len(reps) + 1, "--state-cap")
                hit = len(reps)
                reps.append(cand)
                buckets.setdefault(key, []).append(hit)
                transitions.append([-1] * sigma)
                queue.append(hit)
            transitions[s][a - 1] = hit
    target = 0
    for a in w.letters:
        target = transitions[target][a - 1]
    return ClassAutomaton(
        alphabet,
        k,
        tuple(reps),
        tuple(tuple(row) for row in transitions),
        target,
    )
