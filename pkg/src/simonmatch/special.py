"""Polynomial special cases of the matching problems.

Four routes that avoid the general bounded search:

* one-occurrence variable: the target arch count is reachable iff it is at
  least the count of the all-empty substitution (monotone padding argument);
* constant number of variables: enumerate per-variable signature shapes with
  the top count left symbolic, walk the pattern once per shape assignment,
  and solve a small linear feasibility system for the missing arches;
* regular patterns under (strict) congruence matching: intersect the
  pattern's NFA with the congruence-class automaton of the target;
* a pruning normal form for arch-free words that bounds useful image lengths.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .congruence import ClassAutomaton, class_automaton, simon_congruent
from .core import (
    Alphabet,
    Word,
    arch_factorize,
    empty_word,
    first_occurrence_order,
    universal_word,
    universality_index,
)
from .errors import CapExceeded
from .matching import Pattern, SolverAnswer, Substitution, apply
from .signatures import NEG_INF, observed_signatures

_COIN_DP_LIMIT = 2_000_000


def match_univ_one_occurrence(alpha: Pattern, x: int, k: int) -> SolverAnswer:
    """Decide exact target arch count when variable x occurs exactly once.

    With every other variable erased, the image of the x-free pattern gives a
    floor: images only add arches, so k below the floor is impossible, and
    any k at or above it is reached by completing the pending arch with the
    missing letters and appending full alphabet rounds.
    """
    if alpha.occurrences(x) != 1:
        raise ValueError("variable must occur exactly once in the pattern")
    if k < 0:
        raise ValueError("k must be >= 0")
    alphabet = alpha.alphabet
    eps = empty_word(alphabet)
    erase_others = Substitution({v: eps for v in alpha.variables()})
    floor = universality_index(apply(erase_others, alpha))
    if k < floor:
        return SolverAnswer("no", None, 0, True, "below the all-empty floor")
    if k == floor:
        return SolverAnswer("yes", erase_others, 0, True)

    pos = alpha.symbols.index(-(x + 1))
    prefix = Pattern(
        [s for s in alpha.symbols[:pos] if s > 0], (), alphabet
    )
    prefix_word = apply(Substitution({}), prefix)
    rest_alph = arch_factorize(prefix_word).rest().alph()
    fill = Word(tuple(sorted(alphabet.full_set() - rest_alph)), alphabet)
    h2 = Substitution({v: (fill if v == x else eps) for v in alpha.variables()})
    mid = universality_index(apply(h2, alpha))
    extra = k - mid  # mid is at most floor + 1 <= k
    witness_img = fill + universal_word(alphabet, extra)
    h3 = Substitution({v: (witness_img if v == x else eps) for v in alpha.variables()})
    return SolverAnswer("yes", h3, 0, True)


@dataclass(frozen=True)
class SignatureShape:
    """A signature with the top count value left symbolic: the letters in
    first-appearance order, the number of slots carrying the top value, and
    the rest alphabets."""

    gamma: tuple[int, ...]
    l: int
    rests: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class ArchCountSystem:
    """The missing-arch distribution problem: occurrence-count coefficients,
    a non-negative target, and (when solvable) one solution."""

    coefficients: dict[int, int]
    target: int
    solution: dict[int, int] | None

    def check(self) -> bool:
        if self.solution is None:
            return False
        return sum(self.coefficients[v] * d for v, d in self.solution.items()) == self.target


def _coin_solution(coins: dict[int, int], target: int) -> dict[int, int] | None:
    """Non-negative integers d_v with sum(coins[v] * d_v) == target."""
    if target < 0:
        return None
    if target == 0:
        return {v: 0 for v in coins}
    if not coins:
        return None
    for v, c in coins.items():
        if c == 1:
            out = {u: 0 for u in coins}
            out[v] = target
            return out
    g = math.gcd(*coins.values())
    if target % g:
        return None
    if target > _COIN_DP_LIMIT:
        raise CapExceeded("missing-arch target", _COIN_DP_LIMIT, target, "a smaller k")
    order = sorted(coins)
    values = [coins[v] for v in order]
    # parent[t] = index of the coin used to reach t, -1 if unreachable
    parent = np.full(target + 1, -2, dtype=np.int8)
    parent[0] = -1
    for t in range(1, target + 1):
        for ci, c in enumerate(values):
            if c <= t and parent[t - c] != -2:
                parent[t] = ci
                break
    if parent[target] == -2:
        return None
    out = {v: 0 for v in coins}
    t = target
    while t > 0:
        ci = int(parent[t])
        out[order[ci]] += 1
        t -= values[ci]
    return out


def _shape_walk(segments, shapes: dict[int, "SignatureShape"], sigma: int):
    """Arch count of the image as (constant, coefficient per variable) when
    each variable's image carries its shape with symbolic top count.

    Walk the pattern tracking the letters of the pending arch.  A terminal
    block is scanned directly.  A variable image either closes the pending
    arch at the first gamma-prefix covering the missing letters (adding one
    arch plus the slot's count: top for slots up to l, top-1 after) or never
    closes it and only widens the pending set.
    """
    full = (1 << sigma) - 1
    pending = 0
    const = 0
    coeff: dict[int, int] = {}
    for seg in segments:
        if isinstance(seg, np.ndarray):
            for a in seg:
                pending |= 1 << (int(a) - 1)
                if pending == full:
                    const += 1
                    pending = 0
            continue
        shape = shapes[seg]
        close_at = -1
        acc = pending
        for j, b in enumerate(shape.gamma):
            acc |= 1 << (b - 1)
            if acc == full:
                close_at = j
                break
        if close_at < 0:
            pending = acc
            continue
        const += 1
        if len(shape.gamma) == sigma:
            coeff[seg] = coeff.get(seg, 0) + 1
            if close_at + 1 > shape.l:
                const -= 1  # that slot carries top - 1
        # partial-alphabet shapes carry all-zero counts
        pending = 0
        for b in shape.rests[close_at]:
            pending |= 1 << (b - 1)
    return const, coeff


def _shape_catalogue(sigma: int, search_len: int):
    """Realizable shapes with their minimal top count and a witness, plus the
    set of all syntactically possible shapes."""
    realizable: dict[SignatureShape, tuple[int, tuple[int, ...]]] = {}
    for (gamma, counts, rests), letters in observed_signatures(sigma, search_len):
        defined = len(gamma)
        body = rests[:defined]
        if defined == 0:
            shape = SignatureShape((), 0, ())
            top = 0
        else:
            top = counts[0]
            l = sum(1 for i in range(defined) if counts[i] == top)
            shape = SignatureShape(gamma, l, body)
        if shape not in realizable or realizable[shape][0] > top:
            realizable[shape] = (top, letters)
    syntactic: list[SignatureShape] = [SignatureShape((), 0, ())]
    letters_all = range(1, sigma + 1)
    proper = [frozenset(s) for r in range(sigma) for s in itertools.combinations(letters_all, r)]
    for size in range(1, sigma + 1):
        for gamma in itertools.permutations(letters_all, size):
            ls = range(1, size + 1) if size == sigma else (size,)
            for l in ls:
                for rests in itertools.product(proper, repeat=size):
                    syntactic.append(SignatureShape(gamma, l, rests))
    return realizable, syntactic


def match_univ_const_vars(
    alpha: Pattern,
    k: int,
    max_vars: int = 3,
    search_len: int = 12,
) -> SolverAnswer:
    """Exact target arch count for patterns with few variables over a small
    alphabet, via signature-shape enumeration.

    For each assignment of shapes to variables, the walk gives the image's
    arch count as base + sum(occurrences * top_count); tops can be raised
    freely (full-alphabet shapes pump), so hitting k is a coin problem over
    the occurrence counts.  Shapes never observed within the search bound are
    retried hypothetically: if even those cannot reach k the answer is a firm
    no, otherwise it degrades to unknown.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    sigma = alpha.alphabet.size
    if sigma > 3:
        raise CapExceeded("const-vars alphabet size", 3, sigma, "the general solver")
    variables = [v for v in alpha.variables() if alpha.occurrences(v) > 0]
    if len(variables) > max_vars:
        raise CapExceeded("const-vars variable count", max_vars, len(variables), "--image-cap search instead")
    segments = alpha.segments()
    realizable, syntactic = _shape_catalogue(sigma, search_len)

    def attempt(shape_list, min_top):
        """First feasible shape assignment, or None."""
        for combo in itertools.product(shape_list, repeat=len(variables)):
            shapes = dict(zip(variables, combo))
            const, coeff = _shape_walk(segments, shapes, sigma)
            base = const + sum(coeff.get(v, 0) * min_top(shapes[v]) for v in variables)
            deficit = k - base
            pumpable = {
                v: alpha.occurrences(v)
                for v in variables
                if coeff.get(v, 0) and len(shapes[v].gamma) == sigma
            }
            solution = _coin_solution(pumpable, deficit)
            if solution is not None:
                return shapes, solution, deficit, pumpable
        return None

    def real_top(shape):
        return realizable[shape][0]

    hit = attempt(list(realizable), real_top)
    if hit is not None:
        shapes, solution, deficit, pumpable = hit
        images = {}
        for v in variables:
            top, letters = realizable[shapes[v]]
            img = Word(letters, alpha.alphabet)
            extra = solution.get(v, 0)
            if extra:
                img = universal_word(alpha.alphabet, extra) + img
            images[v] = img
        witness = Substitution(
            {v: images.get(v, empty_word(alpha.alphabet)) for v in alpha.variables()}
        )
        system = ArchCountSystem(pumpable, deficit, solution)
        return SolverAnswer("yes", witness, search_len, True, detail=system)

    # hypothetical pass: could an unobserved shape have mattered?
    unobserved = [s for s in syntactic if s not in realizable]

    def hypo_top(shape):
        if not shape.gamma:
            return 0
        return 0 if shape.l == len(shape.gamma) else 1

    if unobserved and attempt(unobserved + list(realizable), lambda s: (
        real_top(s) if s in realizable else hypo_top(s)
    )) is not None:
        return SolverAnswer(
            "unknown",
            None,
            search_len,
            False,
            "a shape undetermined within the search bound could reach k",
        )
    return SolverAnswer("no", None, search_len, True, "no shape assignment reaches k")


@dataclass(frozen=True)
class _PatternNfa:
    """States 0..last along the terminal spine; variable slots add self-loops."""

    num_states: int
    edges: tuple[tuple[int, int, int], ...]  # (state, letter, next)
    loops: tuple[int, ...]  # states carrying an any-letter self-loop
    final: int


def _build_nfa(alpha: Pattern) -> _PatternNfa:
    edges = []
    loops = set()
    cur = 0
    for s in alpha.symbols:
        if s > 0:
            edges.append((cur, s, cur + 1))
            cur += 1
        else:
            loops.add(cur)
    return _PatternNfa(cur + 1, tuple(edges), tuple(sorted(loops)), cur)


def _nfa_steps(nfa: _PatternNfa, sigma: int):
    table: list[list[list[int]]] = [[[] for _ in range(sigma)] for _ in range(nfa.num_states)]
    for q, a, r in nfa.edges:
        table[q][a - 1].append(r)
    for q in nfa.loops:
        for a in range(sigma):
            table[q][a].append(q)
    return table


def _parse_regular_witness(alpha: Pattern, v: Word) -> Substitution:
    """Split an accepted word into variable images, earliest block matches first."""
    letters = v.letters
    images: dict[int, Word] = {}
    blocks: list[tuple] = []  # interleaved ("t", letters) / ("v", var)
    for seg in alpha.segments():
        if isinstance(seg, np.ndarray):
            blocks.append(("t", tuple(int(x) for x in seg)))
        else:
            blocks.append(("v", seg))
    pos = 0
    end_limit = len(letters)
    if blocks and blocks[-1][0] == "t":
        # the final terminal block is anchored as a suffix
        tail = blocks[-1][1]
        end_limit = len(letters) - len(tail)
        if letters[end_limit:] != tail:
            raise ValueError("witness does not end with the pattern's terminal suffix")
        blocks = blocks[:-1]
    pending_var: int | None = None
    for kind, payload in blocks:
        if kind == "v":
            if pending_var is not None:
                images[pending_var] = empty_word(alpha.alphabet)
            pending_var = payload
            continue
        if pending_var is None:
            if letters[pos : pos + len(payload)] != payload:
                raise ValueError("witness does not start with the pattern's terminal prefix")
            pos += len(payload)
        else:
            found = -1
            for start in range(pos, end_limit - len(payload) + 1):
                if letters[start : start + len(payload)] == payload:
                    found = start
                    break
            if found < 0:
                raise ValueError("witness does not contain a required terminal block")
            images[pending_var] = Word(letters[pos:found], alpha.alphabet)
            pending_var = None
            pos = found + len(payload)
    if pending_var is not None:
        images[pending_var] = Word(letters[pos:end_limit], alpha.alphabet)
        pos = end_limit
    elif pos != end_limit:
        raise ValueError("witness has trailing letters no variable can absorb")
    for v_id in alpha.variables():
        images.setdefault(v_id, empty_word(alpha.alphabet))
    return Substitution(images)


def match_simon_regular(
    alpha: Pattern,
    w: Word,
    k: int,
    strict: bool = False,
    state_cap: int = 100_000,
) -> SolverAnswer:
    """Polynomial decision for regular patterns (every variable occurs once).

    Intersects the pattern's NFA with the congruence-class automaton of the
    target (and, for the strict variant, with the complemented (k+1)-class
    automaton); the answer is emptiness of the product, with the witness word
    extracted from the lexicographically least shortest accepting path.
    """
    if not alpha.is_regular():
        raise ValueError("pattern must be regular (every variable occurring once)")
    if k < 0:
        raise ValueError("k must be >= 0")
    sigma = alpha.alphabet.size
    if w.alphabet.size != sigma:
        raise ValueError("pattern and word must share an alphabet")
    if k == 0 or k >= len(w):
        # same degenerate-range convention as the bounded solvers, so the
        # two methods compute one function
        from .matching import match_simon, match_strict_simon

        return match_strict_simon(alpha, w, k) if strict else match_simon(alpha, w, k)
    nfa = _build_nfa(alpha)
    steps = _nfa_steps(nfa, sigma)
    dfas: list[ClassAutomaton] = [class_automaton(w, k, state_cap)]
    if strict:
        dfas.append(class_automaton(w, k + 1, state_cap))

    def accepting(state) -> bool:
        q, ds = state[0], state[1:]
        if q != nfa.final:
            return False
        if ds[0] != dfas[0].target:
            return False
        if strict and ds[1] == dfas[1].target:
            return False
        return True

    start = (0,) + tuple(0 for _ in dfas)
    parents: dict[tuple, tuple] = {start: None}
    order = [start]
    goal = start if accepting(start) else None
    qi = 0
    while goal is None and qi < len(order):
        state = order[qi]
        qi += 1
        q, ds = state[0], state[1:]
        for a in range(1, sigma + 1):
            nds = tuple(d.transitions[ds[i]][a - 1] for i, d in enumerate(dfas))
            for nq in steps[q][a - 1]:
                nxt = (nq,) + nds
                if nxt in parents:
                    continue
                parents[nxt] = (state, a)
                order.append(nxt)
                if accepting(nxt):
                    goal = nxt
                    break
            if goal is not None:
                break

    if goal is None:
        return SolverAnswer("no", None, 0, True, "product automaton is empty")
    path: list[int] = []
    cur = goal
    while parents[cur] is not None:
        prev, a = parents[cur]
        path.append(a)
        cur = prev
    witness_word = Word(tuple(reversed(path)), alpha.alphabet)
    witness = _parse_regular_witness(alpha, witness_word)
    return SolverAnswer("yes", witness, 0, True, f"witness word {witness_word.render()!r}")


def iota_zero_shortform(v: Word) -> Word:
    """Shrink an arch-free word to at most two occurrences per letter while
    preserving arch counts in every substitution context.

    What a crossing arch sees of v is: the first-appearance order of its
    letters, and for each such letter the alphabet of the suffix after its
    first occurrence (the arch closes there and the suffix feeds the next
    one).  The short form keeps the first-appearance spine and re-inserts
    each letter that must still occur later at the latest point that
    preserves those suffix alphabets.
    """
    if universality_index(v) != 0:
        raise ValueError("word must be arch-free (universality index 0)")
    gamma = first_occurrence_order(v)
    m = len(gamma)
    if m == 0:
        return empty_word(v.alphabet)
    firsts = [v.letters.index(a) for a in gamma]
    suffix_alph = [frozenset(v.letters[p + 1 :]) for p in firsts]
    tails = [frozenset(gamma[t + 1 :]) for t in range(m)]
    needed = [suffix_alph[t] - tails[t] for t in range(m)]
    union_from = [frozenset()] * (m + 1)
    for t in range(m - 1, -1, -1):
        union_from[t] = needed[t] | union_from[t + 1]
    out: list[int] = []
    for t in range(m):
        out.append(gamma[t])
        out.extend(sorted(union_from[t] - union_from[t + 1]))
    return Word(out, v.alphabet)


def solve_match_univ(
    alpha: Pattern,
    k: int,
    method: str = "auto",
    image_cap: int | None = None,
    search_len: int = 12,
) -> SolverAnswer:
    """Method dispatch for the exact-arch-count problem."""
    from .matching import match_univ

    if method == "brute":
        return match_univ(alpha, k, image_cap)
    if method == "one_occurrence":
        x = _once_variable(alpha)
        if x is None:
            raise ValueError("no variable occurs exactly once")
        return match_univ_one_occurrence(alpha, x, k)
    if method == "const_vars":
        return match_univ_const_vars(alpha, k, search_len=search_len)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    x = _once_variable(alpha)
    if x is not None:
        return match_univ_one_occurrence(alpha, x, k)
    active = [v for v in alpha.variables() if alpha.occurrences(v) > 0]
    if alpha.alphabet.size <= 3 and len(active) <= 3:
        return match_univ_const_vars(alpha, k, search_len=search_len)
    return match_univ(alpha, k, image_cap)


def solve_match_simon(
    alpha: Pattern,
    w: Word,
    k: int,
    strict: bool = False,
    method: str = "auto",
    image_cap: int | None = None,
    state_cap: int = 100_000,
) -> SolverAnswer:
    """Method dispatch for (strict) congruence matching."""
    from .matching import match_simon, match_strict_simon

    if method == "regular_automata" or (method == "auto" and alpha.is_regular() and k < len(w)):
        if not alpha.is_regular():
            raise ValueError("regular_automata method needs a regular pattern")
        return match_simon_regular(alpha, w, k, strict, state_cap)
    if method not in ("auto", "brute"):
        raise ValueError(f"unknown method {method!r}")
    if strict:
        return match_strict_simon(alpha, w, k, image_cap)
    return match_simon(alpha, w, k, image_cap)


def _once_variable(alpha: Pattern) -> int | None:
    for v in alpha.variables():
        if alpha.occurrences(v) == 1:
            return v
    return None
