"""Patterns with variables and the five decision problems.

A pattern mixes terminal letters with variables; a substitution maps each
variable to a word and the image of the pattern is the concatenation.  The
solvers here are bounded-complete: they enumerate substitutions with image
lengths up to a cap, answer ``yes`` with a witness, ``no`` only when a
completeness argument covers the search, and ``unknown`` otherwise.

Inline pattern syntax: lowercase letters and other alphabet characters are
terminals, single uppercase ASCII letters are variables, and ``${name}``
introduces a named variable (needed beyond 26 variables or for generated
patterns).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .congruence import simon_congruent, subseq_letter_sets
from .core import (
    Alphabet,
    Word,
    empty_word,
    iter_letter_tuples,
    universal_word,
    universality_index,
)
from .signatures import (
    UniversalitySignature,
    _signature_tuple,
    concat_signatures,
    iota_from_signature,
    signature_of,
)

_EMPTY = np.empty(0, dtype=np.int64)


class Pattern:
    """A sequence of terminals and variables over a fixed alphabet.

    ``symbols`` stores terminals as positive letters and the variable with id
    v as -(v+1); ids are dense and assigned by first appearance.
    """

    __slots__ = ("symbols", "var_names", "alphabet", "_segments")

    def __init__(self, symbols, var_names, alphabet: Alphabet):
        symbols = tuple(symbols)
        var_names = tuple(var_names)
        for s in symbols:
            if s > 0:
                if s > alphabet.size:
                    raise ValueError(f"terminal {s} outside alphabet of size {alphabet.size}")
            elif s == 0 or -s - 1 >= len(var_names):
                raise ValueError(f"bad symbol {s}")
        if len(set(var_names)) != len(var_names):
            raise ValueError("variable names must be distinct")
        self.symbols = symbols
        self.var_names = var_names
        self.alphabet = alphabet
        self._segments = None

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet, names: list[str] | None = None) -> "Pattern":
        """Parse pattern text.  Passing a shared ``names`` list lets two
        patterns (the sides of a word equation) agree on variable ids."""
        if names is None:
            names = []
        symbols = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "$" and i + 1 < len(text) and text[i + 1] == "{":
                end = text.find("}", i + 2)
                if end < 0:
                    raise ValueError("unterminated ${...} variable token")
                name = text[i + 2 : end]
                if not name:
                    raise ValueError("empty variable name")
                i = end + 1
            elif "A" <= ch <= "Z":
                name = ch
                i += 1
            else:
                symbols.append(alphabet.letter(ch))
                i += 1
                continue
            if name not in names:
                names.append(name)
            symbols.append(-(names.index(name) + 1))
        return cls(symbols, names, alphabet)

    @classmethod
    def parse_pair(cls, left: str, right: str, alphabet: Alphabet) -> tuple["Pattern", "Pattern"]:
        """Parse the two sides of a word equation with shared variable ids."""
        names: list[str] = []
        a = cls.parse(left, alphabet, names)
        b = cls.parse(right, alphabet, names)
        # rebuild so both sides carry the final, shared name table
        return cls(a.symbols, names, alphabet), cls(b.symbols, names, alphabet)

    def render(self) -> str:
        bare = all(len(n) == 1 and "A" <= n <= "Z" for n in self.var_names)
        out = []
        for s in self.symbols:
            if s > 0:
                out.append(self.alphabet.char(s))
            else:
                name = self.var_names[-s - 1]
                out.append(name if bare else "${%s}" % name)
        return "".join(out)

    def variables(self) -> list[int]:
        return list(range(len(self.var_names)))

    @property
    def var_count(self) -> int:
        return len(self.var_names)

    @property
    def has_variables(self) -> bool:
        return any(s < 0 for s in self.symbols)

    def occurrences(self, var: int) -> int:
        return self.symbols.count(-(var + 1))

    def is_regular(self) -> bool:
        """True when every variable occurs exactly once."""
        return all(self.occurrences(v) == 1 for v in self.variables())

    def term_set(self) -> frozenset[int]:
        return frozenset(s for s in self.symbols if s > 0)

    def segments(self) -> list:
        """Maximal terminal blocks as int64 arrays interleaved with variable ids."""
        if self._segments is None:
            segs: list = []
            run: list[int] = []
            for s in self.symbols:
                if s > 0:
                    run.append(s)
                else:
                    if run:
                        segs.append(np.array(run, dtype=np.int64))
                        run = []
                    segs.append(-s - 1)
            if run:
                segs.append(np.array(run, dtype=np.int64))
            self._segments = segs
        return self._segments

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other):
        return (
            isinstance(other, Pattern)
            and self.symbols == other.symbols
            and self.alphabet.size == other.alphabet.size
        )

    def __hash__(self):
        return hash((self.symbols, self.alphabet.size))

    def __repr__(self):
        return f"Pattern({self.render()!r})"


class Substitution:
    """Variable id -> image word."""

    __slots__ = ("images",)

    def __init__(self, images: dict[int, Word]):
        self.images = dict(images)

    def image(self, var: int) -> Word:
        return self.images[var]

    def to_json(self, pattern: Pattern) -> dict:
        return {pattern.var_names[v]: w.render() for v, w in sorted(self.images.items())}

    @classmethod
    def from_json(cls, obj: dict, pattern: Pattern) -> "Substitution":
        by_name = {n: i for i, n in enumerate(pattern.var_names)}
        images = {}
        for name, text in obj.items():
            if name not in by_name:
                raise ValueError(f"unknown variable {name!r}")
            images[by_name[name]] = pattern.alphabet.word(text)
        return cls(images)

    def __eq__(self, other):
        return isinstance(other, Substitution) and self.images == other.images

    def __repr__(self):
        return f"Substitution({ {v: w.render() for v, w in self.images.items()} })"


def apply(h: Substitution, alpha: Pattern) -> Word:
    """The image of alpha under h: terminals fixed, variables replaced."""
    letters: list[int] = []
    for s in alpha.symbols:
        if s > 0:
            letters.append(s)
        else:
            var = -s - 1
            if var not in h.images:
                raise ValueError(f"substitution undefined on variable {alpha.var_names[var]}")
            letters.extend(h.images[var].letters)
    return Word(letters, alpha.alphabet)


def _image_arrays(h: Substitution) -> dict[int, np.ndarray]:
    return {v: w.arr for v, w in h.images.items()}


def _iota_of(segments, images: dict[int, np.ndarray], sigma: int) -> int:
    """Arch count of the image where unassigned variables map to the empty word."""
    parts = [seg if isinstance(seg, np.ndarray) else images.get(seg, _EMPTY) for seg in segments]
    arr = np.concatenate(parts) if parts else _EMPTY
    count, _ = kernels.arch_scan(arr, sigma)
    return int(count)


def _image_word(segments, images: dict[int, np.ndarray]) -> np.ndarray:
    parts = [seg if isinstance(seg, np.ndarray) else images.get(seg, _EMPTY) for seg in segments]
    return np.concatenate(parts) if parts else _EMPTY


@dataclass
class SolverAnswer:
    verdict: str  # "yes" | "no" | "unknown"
    witness: Substitution | None
    bound_used: int
    complete: bool
    note: str = ""
    detail: object = None

    @property
    def is_yes(self) -> bool:
        return self.verdict == "yes"

    def to_json(self, pattern: Pattern) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness.to_json(pattern) if self.witness else None,
            "bound_used": self.bound_used,
            "complete": self.complete,
            "note": self.note,
        }


@dataclass(frozen=True)
class SignatureCertificate:
    """One signature per variable; stands in for the actual images."""

    per_var: dict[int, UniversalitySignature]

    def signature_for(self, var: int) -> UniversalitySignature:
        return self.per_var[var]


def verify_certificate(alpha: Pattern, cert: SignatureCertificate) -> int:
    """Arch count of h(alpha) for every h whose images carry the certified
    signatures, computed by folding signature concatenation left to right.

    Certificate signatures are taken on trust; run validity_search on them
    first when they come from an untrusted guess.
    """
    sig = signature_of(empty_word(alpha.alphabet))
    for seg in alpha.segments():
        if isinstance(seg, np.ndarray):
            block = Word(tuple(int(x) for x in seg), alpha.alphabet)
            sig = concat_signatures(sig, signature_of(block))
        else:
            if seg not in cert.per_var:
                raise ValueError(f"certificate missing variable {alpha.var_names[seg]}")
            sig = concat_signatures(sig, cert.signature_for(seg))
    return iota_from_signature(sig)


def match_exact(alpha: Pattern, w: Word) -> Substitution | None:
    """Standalone backtracking matcher for h(alpha) == w; shortest-first
    bindings, so the first solution found is the earliest-split one."""
    symbols = alpha.symbols
    target = w.letters
    n = len(target)
    bindings: dict[int, tuple[int, ...]] = {}

    def go(si: int, wi: int) -> bool:
        if si == len(symbols):
            return wi == n
        s = symbols[si]
        if s > 0:
            return wi < n and target[wi] == s and go(si + 1, wi + 1)
        var = -s - 1
        if var in bindings:
            img = bindings[var]
            if target[wi : wi + len(img)] != img:
                return False
            return go(si + 1, wi + len(img))
        for length in range(n - wi + 1):
            bindings[var] = target[wi : wi + length]
            if go(si + 1, wi + length):
                return True
            del bindings[var]
        return False

    if not go(0, 0):
        return None
    return Substitution(
        {v: Word(bindings.get(v, ()), alpha.alphabet) for v in alpha.variables()}
    )


def _signature_reps(sigma: int, cap: int) -> list[tuple[int, ...]]:
    """Shortlex-first representative per distinct signature among words of
    length <= cap.

    Scanning may stop early: once a whole length level brings no new
    signature, longer words cannot either (the signature of wa is a function
    of the signature of w, so the reachable set is closed from then on).
    """
    return _reps_by_key(sigma, cap, lambda letters: _signature_tuple(letters, sigma))


def _congruence_reps(sigma: int, cap: int, k: int) -> list[tuple[int, ...]]:
    """Shortlex-first representative per k-congruence class within the cap."""
    return _reps_by_key(sigma, cap, lambda letters: subseq_letter_sets(letters, k))


def _reps_by_key(sigma: int, cap: int, key_fn) -> list[tuple[int, ...]]:
    seen = set()
    reps: list[tuple[int, ...]] = []
    for length in range(cap + 1):
        new = False
        for letters in itertools.product(range(1, sigma + 1), repeat=length):
            key = key_fn(letters)
            if key not in seen:
                seen.add(key)
                reps.append(letters)
                new = True
        if length >= 1 and not new:
            break
    return reps


def _collapse_runs(pattern: Pattern):
    """Merge adjacent runs of variables that each occur exactly once.

    Returns (units, groups) where units is a segments-like list over fresh
    slot ids and groups[slot] lists the original variable ids whose images
    concatenate to the slot's image (first variable takes the whole image
    when splitting a witness back).
    """
    occurrences = [pattern.occurrences(v) for v in pattern.variables()]
    units: list = []
    groups: list[list[int]] = []
    run: list[int] = []

    def flush_run():
        nonlocal run
        if run:
            units.append(len(groups))
            groups.append(run)
            run = []

    for seg in pattern.segments():
        if isinstance(seg, np.ndarray):
            flush_run()
            units.append(seg)
        else:
            if occurrences[seg] == 1:
                run.append(seg)
            else:
                flush_run()
                units.append(len(groups))
                groups.append([seg])
    flush_run()
    # variables occurring more than once map all their occurrences to one slot
    slot_of: dict[int, int] = {}
    merged_units: list = []
    merged_groups: list[list[int]] = []
    for unit in units:
        if isinstance(unit, np.ndarray):
            merged_units.append(unit)
            continue
        grp = groups[unit]
        if len(grp) == 1 and pattern.occurrences(grp[0]) > 1:
            v = grp[0]
            if v not in slot_of:
                slot_of[v] = len(merged_groups)
                merged_groups.append([v])
            merged_units.append(slot_of[v])
        else:
            merged_units.append(len(merged_groups))
            merged_groups.append(grp)
    return merged_units, merged_groups


def _split_group_witness(
    pattern: Pattern, groups: list[list[int]], images: dict[int, tuple[int, ...]]
) -> Substitution:
    out: dict[int, Word] = {v: empty_word(pattern.alphabet) for v in pattern.variables()}
    for slot, grp in enumerate(groups):
        out[grp[0]] = Word(images.get(slot, ()), pattern.alphabet)
    return Substitution(out)


def match_univ(alpha: Pattern, k: int, image_cap: int | None = None) -> SolverAnswer:
    """Is there a substitution whose image has exactly k arches?

    Bounded search in shortlex-per-variable, lexicographic-across-variables
    order (deduplicated by image signature, which preserves both the verdict
    and the first witness).  Subtrees whose empty-completion already exceeds
    k are pruned: enlarging images never removes arches.  After the
    systematic search, canonical (1..sigma)^j images are tried per variable
    so single-variable targets beyond the cap are still found.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    sigma = alpha.alphabet.size
    cap = image_cap if image_cap is not None else 2 * sigma + 2
    segments = alpha.segments()
    base = _iota_of(segments, {}, sigma)
    if base > k:
        return SolverAnswer(
            "no", None, cap, True, "empty-image arch count already exceeds k"
        )
    if not alpha.has_variables:
        if base == k:
            return SolverAnswer("yes", Substitution({}), cap, True)
        return SolverAnswer("no", None, cap, True, "no variables to substitute")

    variables = [v for v in alpha.variables() if alpha.occurrences(v) > 0]
    pool = [
        (letters, np.array(letters, dtype=np.int64) if letters else _EMPTY)
        for letters in _signature_reps(sigma, cap)
    ]
    images: dict[int, np.ndarray] = {}
    chosen: dict[int, tuple[int, ...]] = {}

    def witness_from(chosen_images: dict[int, tuple[int, ...]]) -> Substitution:
        return Substitution(
            {
                v: Word(chosen_images.get(v, ()), alpha.alphabet)
                for v in alpha.variables()
            }
        )

    def dfs(idx: int) -> bool:
        if idx == len(variables):
            return _iota_of(segments, images, sigma) == k
        var = variables[idx]
        for letters, arr in pool:
            images[var] = arr
            chosen[var] = letters
            if _iota_of(segments, images, sigma) <= k and dfs(idx + 1):
                return True
        del images[var]
        del chosen[var]
        return False

    if dfs(0):
        return SolverAnswer("yes", witness_from(chosen), cap, True)

    for var in variables:
        for j in range(k + 1):
            candidate = universal_word(alpha.alphabet, j)
            if len(candidate) <= cap:
                continue  # already covered by the systematic search
            images = {var: candidate.arr}
            if _iota_of(segments, images, sigma) == k:
                return SolverAnswer(
                    "yes",
                    witness_from({var: candidate.letters}),
                    cap,
                    True,
                    "canonical universal image beyond cap",
                )

    return SolverAnswer(
        "unknown",
        None,
        cap,
        False,
        f"no witness with images up to length {cap}",
    )


def _exact_by_enumeration(alpha: Pattern, w: Word) -> SolverAnswer:
    """Brute-force exact matcher: enumerate variable images up to |w|.

    Complete, since images longer than the target cannot take part in an
    exact match.  Prunes on the image-length budget.
    """
    n = len(w)
    variables = alpha.variables()
    occ = [alpha.occurrences(v) for v in variables]
    budget = n - sum(1 for s in alpha.symbols if s > 0)
    if budget < 0:
        return SolverAnswer("no", None, n, True, "pattern terminals exceed target length")
    pools: dict[int, list[tuple[int, ...]]] = {}
    for v in variables:
        if occ[v] == 0:
            pools[v] = [()]
            continue
        limit = budget // occ[v]
        pools[v] = list(iter_letter_tuples(alpha.alphabet.size, min(limit, n)))
    chosen: dict[int, tuple[int, ...]] = {}

    def dfs(idx: int, used: int) -> bool:
        if idx == len(variables):
            if used != budget:
                return False
            img = tuple(
                x
                for s in alpha.symbols
                for x in ((s,) if s > 0 else chosen[-s - 1])
            )
            return img == w.letters
        var = variables[idx]
        for letters in pools[var]:
            cost = len(letters) * occ[var]
            if used + cost > budget:
                continue
            chosen[var] = letters
            if dfs(idx + 1, used + cost):
                return True
        chosen.pop(var, None)
        return False

    if dfs(0, 0):
        witness = Substitution({v: Word(chosen[v], alpha.alphabet) for v in variables})
        return SolverAnswer("yes", witness, n, True, "exact matching (k >= |w|)")
    return SolverAnswer("no", None, n, True, "exact matching (k >= |w|)")


def _simon_theory_cap(k: int, sigma: int) -> int:
    """Every word is k-congruent to one of at most this length (binomial
    bound on shortest class representatives)."""
    return math.comb(k + sigma, sigma)


def match_simon(alpha: Pattern, w: Word, k: int, image_cap: int | None = None) -> SolverAnswer:
    """Is there a substitution whose image is k-congruent to w?"""
    if k < 0:
        raise ValueError("k must be >= 0")
    sigma = alpha.alphabet.size
    if w.alphabet.size != sigma:
        raise ValueError("pattern and word must share an alphabet")
    if k == 0:
        witness = Substitution({v: empty_word(alpha.alphabet) for v in alpha.variables()})
        return SolverAnswer("yes", witness, 0, True, "every pair of words is 0-congruent")
    if k >= len(w):
        return _exact_by_enumeration(alpha, w)
    theory = _simon_theory_cap(k, sigma)
    cap = image_cap if image_cap is not None else min(theory, 6)
    complete = cap >= theory
    note = f"complete: images up to {theory} suffice" if complete else ""
    return _bounded_congruence_search(
        alpha,
        k,
        cap,
        complete,
        note,
        dedup_k=k,
        check=lambda img: _arr_congruent(img, w.arr, sigma, k),
        prune_iota=None,
    )


def match_strict_simon(
    alpha: Pattern, w: Word, k: int, image_cap: int | None = None
) -> SolverAnswer:
    """Is there a substitution whose image is k- but not (k+1)-congruent to w?"""
    if k < 0:
        raise ValueError("k must be >= 0")
    sigma = alpha.alphabet.size
    if w.alphabet.size != sigma:
        raise ValueError("pattern and word must share an alphabet")
    if k == 0 and len(w) == 0:
        # 0-congruence is free; failing 1-congruence with the empty word
        # just needs a non-empty image
        if len(alpha) == 0:
            return SolverAnswer("no", None, 0, True, "empty pattern only produces the empty word")
        letter_one = Word((1,), alpha.alphabet)
        witness = Substitution({v: letter_one for v in alpha.variables()})
        return SolverAnswer("yes", witness, 0, True)
    if k >= len(w):
        # any image k-congruent to w would already equal w, hence be
        # (k+1)-congruent as well
        return SolverAnswer("no", None, 0, True, "k >= |w| forces equality")
    theory = _simon_theory_cap(k + 1, sigma)
    cap = image_cap if image_cap is not None else min(theory, 6)
    complete = cap >= theory
    note = f"complete: images up to {theory} suffice" if complete else ""
    # when w has more than k arches, any image with more than k arches is
    # (k+1)-congruent to w (both carry every subsequence up to length k+1)
    prune = k + 1 if universality_index(w) >= k + 1 else None
    return _bounded_congruence_search(
        alpha,
        k,
        cap,
        complete,
        note,
        dedup_k=k + 1,
        check=lambda img: (
            _arr_congruent(img, w.arr, sigma, k) and not _arr_congruent(img, w.arr, sigma, k + 1)
        ),
        prune_iota=prune,
    )


def _arr_congruent(u: np.ndarray, v: np.ndarray, sigma: int, k: int) -> bool:
    return int(kernels.distinguisher(u, v, sigma)) > k


def _bounded_congruence_search(
    alpha: Pattern,
    k: int,
    cap: int,
    complete: bool,
    note: str,
    dedup_k: int,
    check,
    prune_iota: int | None,
) -> SolverAnswer:
    sigma = alpha.alphabet.size
    units, groups = _collapse_runs(alpha)
    pools: list[list[tuple[tuple[int, ...], np.ndarray]]] = []
    for grp in groups:
        slot_cap = cap * len(grp)
        reps = _congruence_reps(sigma, slot_cap, dedup_k)
        pools.append(
            [(t, np.array(t, dtype=np.int64) if t else _EMPTY) for t in reps]
        )
    images: dict[int, np.ndarray] = {}
    chosen: dict[int, tuple[int, ...]] = {}

    def dfs(slot: int) -> bool:
        if slot == len(groups):
            return check(_image_word(units, images))
        for letters, arr in pools[slot]:
            images[slot] = arr
            chosen[slot] = letters
            if prune_iota is None or _iota_of(units, images, sigma) < prune_iota:
                if dfs(slot + 1):
                    return True
        del images[slot]
        del chosen[slot]
        return False

    if dfs(0):
        witness = _split_group_witness(alpha, groups, chosen)
        return SolverAnswer("yes", witness, cap, True, note)
    if complete:
        return SolverAnswer("no", None, cap, True, note)
    return SolverAnswer("unknown", None, cap, False, f"no witness with images up to length {cap}")


def we_simon(alpha: Pattern, beta: Pattern, k: int, image_cap: int | None = None) -> SolverAnswer:
    """Word equation under k-congruence: substitute both sides, compare.

    When both sides contain variables the answer is always yes (map every
    variable to (1..sigma)^k; both images are then k-universal, hence
    congruent).  One constant side reduces to match_simon; none reduces to a
    direct congruence test.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if alpha.alphabet.size != beta.alphabet.size:
        raise ValueError("patterns must share an alphabet")
    all_vars = sorted(set(alpha.variables()) | set(beta.variables()))
    if alpha.has_variables and beta.has_variables:
        img = universal_word(alpha.alphabet, k)
        witness = Substitution({v: img for v in all_vars})
        return SolverAnswer("yes", witness, 0, True, "both sides contain variables")
    if not alpha.has_variables and not beta.has_variables:
        u = apply(Substitution({v: empty_word(alpha.alphabet) for v in alpha.variables()}), alpha)
        v = apply(Substitution({v2: empty_word(beta.alphabet) for v2 in beta.variables()}), beta)
        if simon_congruent(u, v, k):
            return SolverAnswer("yes", Substitution({}), 0, True, "constant sides")
        return SolverAnswer("no", None, 0, True, "constant sides")
    if alpha.has_variables:
        pat, const = alpha, beta
    else:
        pat, const = beta, alpha
    word = apply(Substitution({v: empty_word(const.alphabet) for v in const.variables()}), const)
    answer = match_simon(pat, word, k, image_cap)
    if answer.witness is not None:
        merged = dict(answer.witness.images)
        for v in all_vars:
            merged.setdefault(v, empty_word(alpha.alphabet))
        answer.witness = Substitution(merged)
    return answer


def we_strict_simon(
    alpha: Pattern, beta: Pattern, k: int, image_cap: int | None = None
) -> SolverAnswer:
    """Word equation under strict k-congruence (congruent at k, not at k+1).

    Bounded joint search over the union of variables.  Complete when the cap
    covers the (k+1)-congruence representative bound and k <= |alpha|+|beta|;
    for larger k the answer degrades to unknown on a failed search.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    sigma = alpha.alphabet.size
    if beta.alphabet.size != sigma:
        raise ValueError("patterns must share an alphabet")
    if alpha.symbols == beta.symbols:
        return SolverAnswer("no", None, 0, True, "identical sides are congruent at every k")
    theory = _simon_theory_cap(k + 1, sigma)
    cap = image_cap if image_cap is not None else min(theory, 6)
    complete = cap >= theory and k <= len(alpha) + len(beta)
    note = ""
    if complete:
        note = f"complete: images up to {theory} suffice for k <= |alpha|+|beta|"
    elif k > len(alpha) + len(beta):
        note = "k exceeds |alpha|+|beta|; completeness unknown"
    all_vars = sorted(set(alpha.variables()) | set(beta.variables()))
    seg_a = alpha.segments()
    seg_b = beta.segments()
    reps = _congruence_reps(sigma, cap, k + 1)
    pool = [(t, np.array(t, dtype=np.int64) if t else _EMPTY) for t in reps]
    images: dict[int, np.ndarray] = {}
    chosen: dict[int, tuple[int, ...]] = {}

    def dfs(idx: int) -> bool:
        if idx == len(all_vars):
            ia = _image_word(seg_a, images)
            ib = _image_word(seg_b, images)
            return _arr_congruent(ia, ib, sigma, k) and not _arr_congruent(ia, ib, sigma, k + 1)
        var = all_vars[idx]
        for letters, arr in pool:
            images[var] = arr
            chosen[var] = letters
            # once both sides have more than k arches under the empty
            # completion, every completion keeps them (k+1)-congruent
            if (
                _iota_of(seg_a, images, sigma) <= k
                or _iota_of(seg_b, images, sigma) <= k
            ):
                if dfs(idx + 1):
                    return True
        del images[var]
        del chosen[var]
        return False

    if dfs(0):
        witness = Substitution({v: Word(chosen[v], alpha.alphabet) for v in all_vars})
        return SolverAnswer("yes", witness, cap, True, note)
    if complete:
        return SolverAnswer("no", None, cap, True, note)
    return SolverAnswer("unknown", None, cap, False, note or f"no witness within cap {cap}")
