"""Compilers from 3CNF formulas to matching-problem instances.

The produced pattern concatenates, over the alphabet {0, 1, #, $}:

* two guard blocks that blow up the arch count whenever a variable image
  carries # or $ (so images stay binary),
* per-variable blocks that blow up when an image mixes 0 and 1,
* per-variable blocks ``$ z u #`` that only close when the pair takes
  complementary non-empty values,
* per-clause blocks ``$ 0 . . . #`` that only close when some literal's
  image is all 1s.

With target k = 5n + m + 2, a substitution hits k exactly iff the formula is
satisfiable.  The repetition count B inside the guard blocks only needs to
exceed k; the builder records whether the classic (n+m)^6 value was used.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .core import Alphabet, Word, universality_index
from .errors import CapExceeded
from .matching import Pattern, Substitution, apply

GADGET_CHARS = "01#$"

L0, L1, LHASH, LDOLLAR = 1, 2, 3, 4


def gadget_alphabet() -> Alphabet:
    return Alphabet.from_chars(GADGET_CHARS)


@dataclass(frozen=True)
class CnfFormula:
    """3CNF with DIMACS-style literals: +i for x_i, -i for its negation."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("formula needs at least one variable")
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError("every clause must have exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")
        if not self.clauses:
            raise ValueError("formula needs at least one clause")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: dict[int, bool]) -> bool:
        return all(
            any(assignment[abs(lit)] == (lit > 0) for lit in clause)
            for clause in self.clauses
        )


def parse_dimacs(text: str, pad_duplicates: bool = False) -> CnfFormula:
    """Parse DIMACS CNF.  Clauses with fewer than 3 literals are rejected
    unless pad_duplicates repeats the last literal; longer clauses are
    always rejected."""
    num_vars = None
    clauses = []
    literals: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if len(literals) > 3:
                    raise ValueError(f"clause {literals} has more than 3 literals")
                if len(literals) < 3:
                    if not (pad_duplicates and literals):
                        raise ValueError(
                            f"clause {literals} has fewer than 3 literals "
                            "(pass --pad-duplicates to repeat one)"
                        )
                    while len(literals) < 3:
                        literals.append(literals[-1])
                clauses.append(tuple(literals))
                literals = []
            else:
                literals.append(lit)
    if literals:
        raise ValueError("trailing clause without terminating 0")
    if num_vars is None:
        raise ValueError("missing DIMACS header")
    return CnfFormula(num_vars, tuple(clauses))


def to_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def satisfying_assignment(formula: CnfFormula, max_vars: int = 20) -> dict[int, bool] | None:
    """Exhaustive SAT check at desk scale."""
    if formula.num_vars > max_vars:
        raise CapExceeded("exhaustive SAT variables", max_vars, formula.num_vars, "a real SAT solver")
    for bits in itertools.product((False, True), repeat=formula.num_vars):
        assignment = {i + 1: bits[i] for i in range(formula.num_vars)}
        if formula.satisfied_by(assignment):
            return assignment
    return None


@dataclass(frozen=True)
class GadgetInstance:
    """A compiled matching-problem instance with its bookkeeping."""

    kind: str  # "match_univ" | "match_strict_simon" | "we_strict_simon"
    formula: CnfFormula
    pattern: Pattern
    k: int
    blowup: int
    paper_blowup: bool  # True when blowup == (n+m)^6
    parts: tuple[tuple[str, Pattern], ...]  # named gadget blocks, in order
    word: Word | None = None  # match_strict_simon target
    beta: Pattern | None = None  # we_strict_simon right side

    @property
    def n(self) -> int:
        return self.formula.num_vars

    @property
    def m(self) -> int:
        return self.formula.num_clauses

    def to_json(self) -> dict:
        obj = {
            "lemma": self.kind,
            "alphabet": GADGET_CHARS,
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "B": self.blowup,
            "paper_blowup": self.paper_blowup,
            "clauses": [list(c) for c in self.formula.clauses],
            "pattern": self.pattern.render(),
        }
        if self.word is not None:
            obj["word"] = self.word.render()
        if self.beta is not None:
            obj["beta"] = self.beta.render()
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "GadgetInstance":
        formula = CnfFormula(int(obj["n"]), tuple(tuple(c) for c in obj["clauses"]))
        kind = obj["lemma"]
        rebuilt = build_instance(kind, formula, int(obj["B"]))
        if rebuilt.to_json() != obj:
            raise ValueError("instance JSON does not round-trip through the builder")
        return rebuilt


def _var_z(i: int) -> int:
    return i - 1


def _var_u(formula: CnfFormula, i: int) -> int:
    return formula.num_vars + i - 1


def _rename(formula: CnfFormula, lit: int) -> int:
    """Literal -> string-variable id (x_i -> z_i, negated x_i -> u_i)."""
    return _var_z(lit) if lit > 0 else _var_u(formula, -lit)


def _gadget_parts(formula: CnfFormula, B: int) -> list[tuple[str, list[int]]]:
    n = formula.num_vars
    zs = [-(_var_z(i) + 1) for i in range(1, n + 1)]
    us = [-(_var_u(formula, i) + 1) for i in range(1, n + 1)]
    parts: list[tuple[str, list[int]]] = []
    parts.append(("pi_hash", (zs + us + [L0, L1, LDOLLAR]) * B + [LHASH]))
    parts.append(("pi_dollar", (zs + us + [L0, L1, LHASH]) * B + [LDOLLAR]))
    boolean_tail = [L1, L0, L0, L1, LDOLLAR, LHASH]
    for i in range(1, n + 1):
        parts.append((f"pi_z{i}", [zs[i - 1], LDOLLAR, LHASH] * B + boolean_tail))
        parts.append((f"pi_u{i}", [us[i - 1], LDOLLAR, LHASH] * B + boolean_tail))
    for i in range(1, n + 1):
        parts.append((f"xi{i}", [LDOLLAR, zs[i - 1], us[i - 1], LHASH]))
    for j, clause in enumerate(formula.clauses, start=1):
        body = [LDOLLAR, L0]
        body += [-(_rename(formula, lit) + 1) for lit in clause]
        body.append(LHASH)
        parts.append((f"delta{j}", body))
    return parts


def _var_names(formula: CnfFormula, fresh: bool = False) -> list[str]:
    n = formula.num_vars
    names = [f"z{i}" for i in range(1, n + 1)] + [f"u{i}" for i in range(1, n + 1)]
    if fresh:
        names.append("x")
    return names


def _pattern_size(formula: CnfFormula, B: int) -> int:
    n, m = formula.num_vars, formula.num_clauses
    return 2 * (B * (2 * n + 3) + 1) + 2 * n * (3 * B + 6) + 4 * n + 6 * m


def _pick_blowup(formula: CnfFormula, blowup: int | None, size_budget: int):
    k = 5 * formula.num_vars + formula.num_clauses + 2
    paper = (formula.num_vars + formula.num_clauses) ** 6
    if blowup is None:
        blowup = paper if _pattern_size(formula, paper) <= size_budget else k + 1
    if blowup <= k:
        raise ValueError(f"blowup {blowup} must exceed the target {k}")
    return k, blowup, blowup == paper


def build_match_univ_instance(
    formula: CnfFormula, blowup: int | None = None, size_budget: int = 200_000
) -> GadgetInstance:
    """Compile the formula to an exact-arch-count instance with target
    k = 5n + m + 2."""
    k, B, is_paper = _pick_blowup(formula, blowup, size_budget)
    names = _var_names(formula)
    raw_parts = _gadget_parts(formula, B)
    alphabet = gadget_alphabet()
    parts = tuple(
        (name, Pattern(symbols, names, alphabet)) for name, symbols in raw_parts
    )
    all_symbols = [s for _, symbols in raw_parts for s in symbols]
    pattern = Pattern(all_symbols, names, alphabet)
    return GadgetInstance("match_univ", formula, pattern, k, B, is_paper, parts)


def _strict_word(formula: CnfFormula) -> Word:
    k = 5 * formula.num_vars + formula.num_clauses + 2
    return Word((L1, L0, LDOLLAR, LHASH) * (k + 1), gadget_alphabet())


def build_match_strict_instance(
    formula: CnfFormula, blowup: int | None = None, size_budget: int = 200_000
) -> GadgetInstance:
    """Same pattern, plus the target word (10$#)^(k+1): a strict-congruence
    match at level k exists iff some image has exactly k arches."""
    base = build_match_univ_instance(formula, blowup, size_budget)
    return GadgetInstance(
        "match_strict_simon",
        formula,
        base.pattern,
        base.k,
        base.blowup,
        base.paper_blowup,
        base.parts,
        word=_strict_word(formula),
    )


def build_we_strict_instance(
    formula: CnfFormula, blowup: int | None = None, size_budget: int = 200_000
) -> GadgetInstance:
    """Word-equation form: the right side is (10$#)^(k+1) followed by a fresh
    variable, so both sides carry variables."""
    base = build_match_univ_instance(formula, blowup, size_budget)
    names = _var_names(formula, fresh=True)
    alphabet = gadget_alphabet()
    pattern = Pattern(base.pattern.symbols, names, alphabet)
    parts = tuple((nm, Pattern(p.symbols, names, alphabet)) for nm, p in base.parts)
    fresh_id = len(names) - 1
    beta_symbols = list(_strict_word(formula).letters) + [-(fresh_id + 1)]
    beta = Pattern(beta_symbols, names, alphabet)
    return GadgetInstance(
        "we_strict_simon",
        formula,
        pattern,
        base.k,
        base.blowup,
        base.paper_blowup,
        parts,
        beta=beta,
    )


def build_instance(kind: str, formula: CnfFormula, blowup: int | None = None) -> GadgetInstance:
    builders = {
        "match_univ": build_match_univ_instance,
        "match_strict_simon": build_match_strict_instance,
        "we_strict_simon": build_we_strict_instance,
    }
    if kind not in builders:
        raise ValueError(f"unknown instance kind {kind!r}")
    return builders[kind](formula, blowup)


def canonical_substitution(instance: GadgetInstance, assignment: dict[int, bool]) -> Substitution:
    """The single-letter substitution induced by a Boolean assignment:
    true variables map their z to 1 and u to 0, false the other way."""
    alphabet = instance.pattern.alphabet
    one = Word((L1,), alphabet)
    zero = Word((L0,), alphabet)
    images: dict[int, Word] = {}
    for i in range(1, instance.n + 1):
        value = assignment[i]
        images[_var_z(i)] = one if value else zero
        images[_var_u(instance.formula, i)] = zero if value else one
    for v in instance.pattern.variables():
        images.setdefault(v, Word((), alphabet))
    return Substitution(images)


@dataclass(frozen=True)
class DecodeResult:
    assignment: dict[int, bool] | None
    ok: bool
    diagnostics: tuple[str, ...]


def decode_assignment(instance: GadgetInstance, h: Substitution) -> DecodeResult:
    """Read a Boolean assignment off a substitution that hits the target
    arch count; otherwise report which gadget property the images violate."""
    formula = instance.formula
    n = formula.num_vars
    diags: list[str] = []
    image = apply(h, instance.pattern)
    iota = universality_index(image)
    if iota != instance.k:
        diags.append(f"image has {iota} arches, target is {instance.k}; refusing to decode")

    def img(var: int) -> Word:
        return h.images[var]

    def name(var: int) -> str:
        return instance.pattern.var_names[var]

    for i in range(1, n + 1):
        for var, gadget in ((_var_z(i), f"pi_z{i}"), (_var_u(formula, i), f"pi_u{i}")):
            letters = set(img(var).letters)
            if LHASH in letters:
                diags.append(f"image of {name(var)} contains '#': guard gadget pi_hash violated")
            if LDOLLAR in letters:
                diags.append(f"image of {name(var)} contains '$': guard gadget pi_dollar violated")
            if L0 in letters and L1 in letters:
                diags.append(f"image of {name(var)} mixes 0 and 1: boolean gadget {gadget} violated")
    for i in range(1, n + 1):
        zi, ui = img(_var_z(i)), img(_var_u(formula, i))
        za, ua = set(zi.letters), set(ui.letters)
        if not zi.letters or not ui.letters:
            diags.append(
                f"complementation gadget xi{i} violated: images of z{i}/u{i} must both be non-empty"
            )
        elif za == ua or not (za | ua) <= {L0, L1}:
            diags.append(
                f"complementation gadget xi{i} violated: z{i} and u{i} must take opposite letters"
            )
    for j, clause in enumerate(formula.clauses, start=1):
        if not any(
            img(_rename(formula, lit)).letters
            and set(img(_rename(formula, lit)).letters) == {L1}
            for lit in clause
        ):
            diags.append(f"clause gadget delta{j} violated: no literal image is all 1s")
    if diags:
        return DecodeResult(None, False, tuple(diags))
    assignment = {i: set(img(_var_z(i)).letters) == {L1} for i in range(1, n + 1)}
    if not formula.satisfied_by(assignment):
        return DecodeResult(None, False, ("decoded assignment does not satisfy the formula",))
    return DecodeResult(assignment, True, ())
