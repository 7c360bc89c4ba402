"""Words over small integer alphabets and their greedy arch structure.

Letters are the integers 1..sigma.  Positions in the public contracts are
1-based; Python-level indexing into ``Word.letters`` stays 0-based.  The
"no such position" sentinel is ``math.inf`` so that comparisons stay total.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels

INF = math.inf
NEG_INF = -math.inf

_DEFAULT_CHARS = "abcdefghijklmnopqrstuvwxyz"
_EMPTY_ARR = np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class Alphabet:
    """A fixed alphabet of size ``size`` with a letter <-> character bijection."""

    size: int
    render_chars: tuple[str, ...] = ()

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet size must be >= 1")
        if self.size > 62:
            raise ValueError("alphabet size is capped at 62")
        chars = self.render_chars
        if not chars:
            if self.size > len(_DEFAULT_CHARS):
                raise ValueError("no default rendering beyond 26 letters; pass render_chars")
            chars = tuple(_DEFAULT_CHARS[: self.size])
            object.__setattr__(self, "render_chars", chars)
        if len(chars) != self.size or len(set(chars)) != self.size:
            raise ValueError("render_chars must give one distinct character per letter")
        if any(len(c) != 1 for c in chars):
            raise ValueError("render_chars entries must be single characters")

    @classmethod
    def from_chars(cls, chars: str) -> "Alphabet":
        return cls(len(chars), tuple(chars))

    def letters(self) -> range:
        return range(1, self.size + 1)

    def full_set(self) -> frozenset[int]:
        return frozenset(range(1, self.size + 1))

    def char(self, letter: int) -> str:
        if not 1 <= letter <= self.size:
            raise ValueError(f"letter {letter} outside alphabet of size {self.size}")
        return self.render_chars[letter - 1]

    def letter(self, char: str) -> int:
        try:
            return self.render_chars.index(char) + 1
        except ValueError:
            raise ValueError(f"character {char!r} is not in the alphabet") from None

    def word(self, text: str) -> "Word":
        return Word(tuple(self.letter(c) for c in text), self)

    def render(self, letters: Iterable[int]) -> str:
        return "".join(self.char(a) for a in letters)


class Word:
    """An immutable word; empty words are allowed."""

    __slots__ = ("letters", "alphabet", "_arr")

    def __init__(self, letters: Sequence[int], alphabet: Alphabet):
        letters = tuple(letters)
        for a in letters:
            if not 1 <= a <= alphabet.size:
                raise ValueError(f"letter {a} outside alphabet of size {alphabet.size}")
        self.letters = letters
        self.alphabet = alphabet
        self._arr = None

    @property
    def arr(self) -> np.ndarray:
        if self._arr is None:
            self._arr = np.array(self.letters, dtype=np.int64) if self.letters else _EMPTY_ARR
        return self._arr

    def alph(self) -> frozenset[int]:
        return frozenset(self.letters)

    def count(self, letter: int) -> int:
        return self.letters.count(letter)

    def render(self) -> str:
        return self.alphabet.render(self.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Word(self.letters[idx], self.alphabet)
        return self.letters[idx]

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet.size != self.alphabet.size:
            raise ValueError("cannot concatenate words over different alphabets")
        return Word(self.letters + other.letters, self.alphabet)

    def __mul__(self, n: int) -> "Word":
        return Word(self.letters * n, self.alphabet)

    def __eq__(self, other):
        return (
            isinstance(other, Word)
            and self.letters == other.letters
            and self.alphabet.size == other.alphabet.size
        )

    def __hash__(self):
        return hash((self.letters, self.alphabet.size))

    def __repr__(self):
        return f"Word({self.render()!r})"


def empty_word(alphabet: Alphabet) -> Word:
    return Word((), alphabet)


def full_permutation_word(alphabet: Alphabet) -> Word:
    """The ascending permutation 1..sigma as a word."""
    return Word(tuple(alphabet.letters()), alphabet)


def universal_word(alphabet: Alphabet, k: int) -> Word:
    """(1..sigma)^k, the canonical word with exactly k arches."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return Word(tuple(alphabet.letters()) * k, alphabet)


def iter_letter_tuples(sigma: int, max_len: int, min_len: int = 0) -> Iterator[tuple[int, ...]]:
    """All letter tuples of length min_len..max_len in shortlex order."""
    letters = range(1, sigma + 1)
    for length in range(min_len, max_len + 1):
        yield from itertools.product(letters, repeat=length)


def iter_words(alphabet: Alphabet, max_len: int, min_len: int = 0) -> Iterator[Word]:
    for t in iter_letter_tuples(alphabet.size, max_len, min_len):
        yield Word(t, alphabet)


@dataclass(frozen=True)
class XRankerTable:
    """Constant-time lookup of the first occurrence of a letter after a position."""

    word: Word
    table: np.ndarray  # shape (n+1, sigma); values are 1-based positions, n+1 = none

    def next(self, i: int, letter: int):
        """First position of ``letter`` strictly after position ``i``; INF if none.

        ``i`` ranges over 0..len(word); i=0 queries the first occurrence overall.
        """
        n = len(self.word)
        if not 0 <= i <= n:
            raise ValueError(f"position {i} outside 0..{n}")
        if not 1 <= letter <= self.word.alphabet.size:
            raise ValueError(f"letter {letter} outside alphabet")
        p = int(self.table[i, letter - 1])
        return p if p <= n else INF


def build_xranker(w: Word) -> XRankerTable:
    return XRankerTable(w, kernels.next_table(w.arr, w.alphabet.size))


@dataclass(frozen=True)
class ArchFactorization:
    """The unique greedy split of a word into arches plus a rest.

    Each arch is the shortest extension of the previous cut that contains the
    whole alphabet; the rest is the leftover suffix whose alphabet is proper.
    """

    word: Word
    arch_ends: tuple[int, ...]  # 1-based end positions, strictly increasing

    @property
    def iota(self) -> int:
        return len(self.arch_ends)

    @property
    def rest_start(self) -> int:
        """1-based position where the rest begins (len+1 when the rest is empty)."""
        return self.arch_ends[-1] + 1 if self.arch_ends else 1

    def arches(self) -> list[Word]:
        out = []
        prev = 0
        for end in self.arch_ends:
            out.append(self.word[prev:end])
            prev = end
        return out

    def rest(self) -> Word:
        return self.word[self.rest_start - 1 :]


def arch_factorize(w: Word) -> ArchFactorization:
    out = np.empty(max(len(w), 1), dtype=np.int64)
    count = int(kernels.arch_ends(w.arr, w.alphabet.size, out))
    return ArchFactorization(w, tuple(int(x) for x in out[:count]))


def universality_index(w: Word) -> int:
    """Number of arches of w (the largest k such that w has every length-k subsequence)."""
    count, _ = kernels.arch_scan(w.arr, w.alphabet.size)
    return int(count)


def first_occurrence_order(w: Word) -> tuple[int, ...]:
    """The letters of w in order of first appearance."""
    seen = []
    present = set()
    for a in w.letters:
        if a not in present:
            present.add(a)
            seen.append(a)
    return tuple(seen)


def signature_letter_arches(w: Word, letter: int) -> tuple[int, frozenset[int]]:
    """Arch count and rest alphabet of the suffix after the first occurrence of ``letter``.

    ``letter`` must occur in w.
    """
    if letter not in w.alph():
        raise ValueError(f"letter {letter} does not occur in the word")
    pos = w.letters.index(letter) + 1
    fact = arch_factorize(w[pos:])
    return fact.iota, fact.rest().alph()


@dataclass(frozen=True)
class MarginalSequence:
    """Breadth-first merged arch endpoints of the per-letter suffix factorisations.

    ``terms`` starts with 0, then the first-occurrence position of each letter in
    first-appearance order, then the arch end positions by round; ``last`` is
    the word length and closes the final segment.
    """

    terms: tuple[int, ...]
    last: int
    gamma: tuple[int, ...]

    def boundaries(self) -> tuple[int, ...]:
        return self.terms + (self.last,)


def marginal_sequence(w: Word) -> MarginalSequence:
    sigma = w.alphabet.size
    gamma = first_occurrence_order(w)
    if len(gamma) != sigma:
        raise ValueError("marginal sequence requires every alphabet letter to occur")
    first = {a: w.letters.index(a) + 1 for a in gamma}
    terms = [0] + [first[a] for a in gamma]
    ends = []
    for a in gamma:
        fact = arch_factorize(w[first[a] :])
        ends.append([first[a] + e for e in fact.arch_ends])
    level = 0
    while True:
        found = False
        for j in range(sigma):
            if level < len(ends[j]):
                terms.append(ends[j][level])
                found = True
        if not found:
            break
        level += 1
    return MarginalSequence(tuple(terms), len(w), gamma)
