"""Subsequence universality, Simon congruence, and pattern matching with variables."""

from .core import (
    INF,
    NEG_INF,
    Alphabet,
    ArchFactorization,
    MarginalSequence,
    Word,
    XRankerTable,
    arch_factorize,
    build_xranker,
    empty_word,
    first_occurrence_order,
    full_permutation_word,
    marginal_sequence,
    signature_letter_arches,
    universal_word,
    universality_index,
)
from .congruence import (
    ClassAutomaton,
    SubseqSet,
    class_automaton,
    shortest_distinguisher,
    simon_congruent,
    subseq_set,
)
from .signatures import (
    CompactK,
    UniversalitySignature,
    ValidityVerdict,
    concat_signatures,
    iota_from_signature,
    normalize_block,
    pump_signature,
    signature_from_json,
    signature_of,
    signature_to_json,
    validity_search,
)
from .matching import (
    Pattern,
    SignatureCertificate,
    SolverAnswer,
    Substitution,
    apply,
    match_exact,
    match_simon,
    match_strict_simon,
    match_univ,
    verify_certificate,
    we_simon,
    we_strict_simon,
)
from .special import (
    ArchCountSystem,
    SignatureShape,
    iota_zero_shortform,
    match_simon_regular,
    match_univ_const_vars,
    match_univ_one_occurrence,
    solve_match_simon,
    solve_match_univ,
)
from .reductions import (
    CnfFormula,
    DecodeResult,
    GadgetInstance,
    build_match_strict_instance,
    build_match_univ_instance,
    build_we_strict_instance,
    canonical_substitution,
    decode_assignment,
    gadget_alphabet,
    parse_dimacs,
    satisfying_assignment,
    to_dimacs,
)
from .errors import CapExceeded

__all__ = [name for name in dir() if not name.startswith("_")]
