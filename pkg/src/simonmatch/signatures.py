"""Subsequence universality signatures.

A signature condenses everything about a word that matters for counting
arches across concatenations: the letters in first-appearance order
(``gamma``), the arch count of the suffix after each such first occurrence
(``counts``), and the alphabet of the leftover rest of that suffix
(``rests``).  Slots for letters that never occur are padded with -inf and the
full alphabet.  Signatures compose: ``concat_signatures(s(u), s(v)) = s(uv)``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    NEG_INF,
    Alphabet,
    Word,
    first_occurrence_order,
    iter_letter_tuples,
    marginal_sequence,
    signature_letter_arches,
)


@dataclass(frozen=True)
class UniversalitySignature:
    gamma: tuple[int, ...]
    counts: tuple  # ints on the first len(gamma) slots, NEG_INF padding after
    rests: tuple[frozenset[int], ...]  # rest alphabets, full-alphabet padding

    def __post_init__(self):
        sigma = len(self.counts)
        defined = len(self.gamma)
        if len(self.rests) != sigma or defined > sigma:
            raise ValueError("signature arrays must have one slot per alphabet letter")
        if len(set(self.gamma)) != defined:
            raise ValueError("gamma letters must be distinct")
        full = frozenset(range(1, sigma + 1))
        if any(a not in full for a in self.gamma):
            raise ValueError("gamma letters outside alphabet")
        for i in range(defined):
            c = self.counts[i]
            if not (isinstance(c, int) and c >= 0):
                raise ValueError("defined count entries must be integers >= 0")
            if not self.rests[i] <= full or self.rests[i] == full:
                raise ValueError("defined rest entries must be proper subsets of the alphabet")
        for i in range(defined, sigma):
            if self.counts[i] != NEG_INF or self.rests[i] != full:
                raise ValueError("padding slots must carry -inf and the full alphabet")
        for i in range(1, defined):
            if self.counts[i] > self.counts[i - 1]:
                raise ValueError("count entries must be non-increasing")
        if defined and self.counts[0] - self.counts[defined - 1] > 1:
            raise ValueError("count entries may spread by at most 1")

    @property
    def sigma(self) -> int:
        return len(self.counts)

    @property
    def defined(self) -> int:
        return len(self.gamma)


@dataclass(frozen=True)
class CompactK:
    """Two-integer encoding of the count array: k' on the first l defined
    slots, k'-1 on the remaining defined slots."""

    l: int
    k_prime: int

    def expand(self, defined: int, sigma: int) -> tuple:
        if defined == 0:
            return (NEG_INF,) * sigma
        if not 1 <= self.l <= defined:
            raise ValueError("l must lie in 1..len(gamma)")
        if self.k_prime < 0 or (self.l < defined and self.k_prime < 1):
            raise ValueError("k_prime too small for the encoded shape")
        body = tuple(self.k_prime if i < self.l else self.k_prime - 1 for i in range(defined))
        return body + (NEG_INF,) * (sigma - defined)

    @classmethod
    def from_signature(cls, sig: UniversalitySignature) -> "CompactK | None":
        if sig.defined == 0:
            return None
        top = sig.counts[0]
        l = sum(1 for i in range(sig.defined) if sig.counts[i] == top)
        if sig.counts != cls(l, top).expand(sig.defined, sig.sigma):
            return None
        return cls(l, top)


def _signature_tuple(letters: tuple[int, ...], sigma: int):
    """(gamma, counts, rests) of a raw letter tuple; avoids Word overhead."""
    gamma = []
    present = set()
    firsts = []
    for i, a in enumerate(letters):
        if a not in present:
            present.add(a)
            gamma.append(a)
            firsts.append(i + 1)
    counts = []
    rests = []
    for a, pos in zip(gamma, firsts):
        suffix = letters[pos:]
        arr = np.array(suffix, dtype=np.int64) if suffix else _EMPTY
        n_arch, rest_start = kernels.arch_scan(arr, sigma)
        counts.append(int(n_arch))
        rests.append(frozenset(suffix[int(rest_start) :]))
    full = frozenset(range(1, sigma + 1))
    pad = sigma - len(gamma)
    return tuple(gamma), tuple(counts) + (NEG_INF,) * pad, tuple(rests) + (full,) * pad


_EMPTY = np.empty(0, dtype=np.int64)


def signature_of(w: Word) -> UniversalitySignature:
    gamma, counts, rests = _signature_tuple(w.letters, w.alphabet.size)
    return UniversalitySignature(gamma, counts, rests)


def iota_from_signature(sig: UniversalitySignature) -> int:
    """Arch count of any word with this signature.

    The first arch of such a word closes exactly at the first occurrence of
    the last letter to appear, so the total is that letter's count plus one.
    """
    if sig.defined < sig.sigma:
        return 0
    return sig.counts[sig.sigma - 1] + 1


def concat_signatures(su: UniversalitySignature, sv: UniversalitySignature) -> UniversalitySignature:
    """Signature of uv from the signatures of u and v.

    For a letter first seen in u, the pending rest after its arches either
    closes inside v (at the first occurrence of the earliest gamma-prefix of
    v covering the missing letters, adding 1 + that letter's count in v) or
    it never closes and just absorbs v's alphabet.  Letters first seen in v
    keep their v-side entries.
    """
    sigma = su.sigma
    if sv.sigma != sigma:
        raise ValueError("signatures must share an alphabet size")
    full = frozenset(range(1, sigma + 1))
    gamma_u, gamma_v = su.gamma, sv.gamma
    in_u = set(gamma_u)
    gamma = gamma_u + tuple(a for a in gamma_v if a not in in_u)
    alph_v = frozenset(gamma_v)

    counts: list = []
    rests: list = []
    for i in range(len(gamma_u)):
        need = full - su.rests[i]
        close_at = -1
        if need <= alph_v:
            covered = set()
            for j, b in enumerate(gamma_v):
                covered.add(b)
                if need <= covered:
                    close_at = j
                    break
        if close_at < 0:
            counts.append(su.counts[i])
            rests.append(su.rests[i] | alph_v)
        else:
            counts.append(su.counts[i] + 1 + sv.counts[close_at])
            rests.append(sv.rests[close_at])
    for j, a in enumerate(gamma_v):
        if a not in in_u:
            counts.append(sv.counts[j])
            rests.append(sv.rests[j])
    pad = sigma - len(gamma)
    return UniversalitySignature(
        gamma,
        tuple(counts) + (NEG_INF,) * pad,
        tuple(rests) + (full,) * pad,
    )


def pump_signature(sig: UniversalitySignature, c: int) -> UniversalitySignature:
    """Add c to every defined count; the signature of gamma^c prepended to a witness.

    Only meaningful for full-alphabet signatures (which always describe words
    with at least one arch).
    """
    if c < 0:
        raise ValueError("pump amount must be >= 0")
    if sig.defined != sig.sigma:
        raise ValueError("pumping requires a full-alphabet gamma")
    if iota_from_signature(sig) < 1:
        raise ValueError("pumping requires at least one arch")
    if c == 0:
        return sig
    return UniversalitySignature(
        sig.gamma,
        tuple(k + c for k in sig.counts),
        sig.rests,
    )


def normalize_block(w: Word, t: int) -> Word:
    """Replace the t-th marginal segment by its canonical permutation.

    The segment's alphabet is kept and its final letter stays final; the
    remaining letters are sorted ascending.  The result has the same
    signature as w.  t must index a non-empty segment and be >= 1.
    """
    ms = marginal_sequence(w)
    bounds = ms.boundaries()
    if not 1 <= t <= len(bounds) - 2:
        raise ValueError(f"segment index {t} outside 1..{len(bounds) - 2}")
    lo, hi = bounds[t], bounds[t + 1]
    if lo >= hi:
        raise ValueError(f"segment {t} is empty")
    seg = w.letters[lo:hi]
    last = seg[-1]
    repl = tuple(sorted(set(seg) - {last})) + (last,)
    return Word(w.letters[:lo] + repl + w.letters[hi:], w.alphabet)


@dataclass(frozen=True)
class ValidityVerdict:
    """Outcome of a bounded witness search for a candidate signature.

    ``witness`` realizes the candidate with every defined count lowered by
    ``shift``; absence of a witness within ``bound`` proves nothing beyond
    the bound (the verdict records that honestly).
    """

    witness: Word | None
    shift: int | None
    bound: int

    @property
    def found(self) -> bool:
        return self.witness is not None


@functools.lru_cache(maxsize=None)
def observed_signatures(sigma: int, max_len: int):
    """All signatures of words of length <= max_len, with their first
    (shortlex-least) witness, in discovery order."""
    seen = {}
    order = []
    for letters in iter_letter_tuples(sigma, max_len):
        key = _signature_tuple(letters, sigma)
        if key not in seen:
            seen[key] = letters
            order.append((key, letters))
    return tuple(order)


def validity_search(
    alphabet: Alphabet,
    gamma: tuple[int, ...],
    counts,
    rests: tuple[frozenset[int], ...],
    max_len: int = 12,
) -> ValidityVerdict:
    """Search for a word whose signature matches (gamma, counts - c, rests).

    The shift c >= 0 is only admissible for full-alphabet gammas (prepending
    gamma^c to a witness raises every count by c); partial gammas can only
    carry all-zero counts, so they must match exactly.  Enumerates words in
    shortlex order up to max_len and returns the first hit.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    sigma = alphabet.size
    gamma = tuple(gamma)
    if isinstance(counts, CompactK):
        counts = counts.expand(len(gamma), sigma)
    counts = tuple(counts)
    rests = tuple(frozenset(r) for r in rests)
    if len(counts) != sigma or len(rests) != sigma:
        raise ValueError("counts and rests must have one slot per alphabet letter")
    defined = len(gamma)
    full = alphabet.full_set()
    for i in range(defined, sigma):
        if counts[i] != NEG_INF or rests[i] != full:
            # real signatures always pad undefined slots this way
            return ValidityVerdict(None, None, max_len)
    for (g, c, r), letters in observed_signatures(sigma, max_len):
        if g != gamma or r != rests:
            continue
        shift = 0
        if defined:
            if counts[0] == NEG_INF:
                continue
            shift = counts[0] - c[0]
        if shift < 0 or (shift > 0 and defined < sigma):
            continue
        if all(counts[i] == c[i] + shift for i in range(defined)):
            return ValidityVerdict(Word(letters, alphabet), shift, max_len)
    return ValidityVerdict(None, None, max_len)


def signature_to_json(sig: UniversalitySignature, alphabet: Alphabet) -> dict:
    compact = CompactK.from_signature(sig)
    if compact is not None:
        k_field = {"l": compact.l, "k_prime": compact.k_prime}
    else:
        k_field = ["-inf" if c == NEG_INF else c for c in sig.counts]
    return {
        "gamma": alphabet.render(sig.gamma),
        "K": k_field,
        "R": [alphabet.render(sorted(r)) for r in sig.rests],
    }


def signature_from_json(obj: dict, alphabet: Alphabet) -> UniversalitySignature:
    sigma = alphabet.size
    gamma = tuple(alphabet.letter(ch) for ch in obj["gamma"])
    k_field = obj["K"]
    if isinstance(k_field, dict):
        counts = CompactK(int(k_field["l"]), int(k_field["k_prime"])).expand(len(gamma), sigma)
    else:
        counts = tuple(NEG_INF if c == "-inf" else int(c) for c in k_field)
    rests = tuple(frozenset(alphabet.letter(ch) for ch in entry) for entry in obj["R"])
    return UniversalitySignature(gamma, counts, rests)
