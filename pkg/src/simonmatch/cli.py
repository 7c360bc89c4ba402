"""Command-line front end.

Exit codes: 0 success (including "unknown" verdicts), 2 parse/input errors,
3 cap refusals.  All output is UTF-8, newline-terminated, and deterministic
for a fixed argv.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .congruence import class_automaton, shortest_distinguisher, simon_congruent, subseq_set
from .core import INF, Alphabet, Word, arch_factorize, marginal_sequence, universality_index
from .errors import CapExceeded
from .matching import (
    Pattern,
    SolverAnswer,
    Substitution,
    we_simon,
    we_strict_simon,
)
from .reductions import (
    GadgetInstance,
    build_instance,
    decode_assignment,
    gadget_alphabet,
    parse_dimacs,
)
from .signatures import (
    concat_signatures,
    signature_from_json,
    signature_of,
    signature_to_json,
    validity_search,
)
from .special import solve_match_simon, solve_match_univ

EPS = "ε"


def _alphabet(args) -> Alphabet:
    return Alphabet.from_chars(args.alphabet)


def _render(w: Word) -> str:
    return w.render() or EPS


def _emit(args, text_lines, json_obj) -> int:
    if args.json:
        print(json.dumps(json_obj, sort_keys=True))
    else:
        for line in text_lines:
            print(line)
    return 0


def _answer_output(args, answer: SolverAnswer, pattern: Pattern, extra: dict | None = None):
    obj = answer.to_json(pattern)
    if extra:
        obj.update(extra)
    lines = [f"verdict: {answer.verdict}"]
    if answer.witness is not None:
        parts = [
            f"{name}={text or EPS}"
            for name, text in sorted(answer.witness.to_json(pattern).items())
        ]
        lines.append("witness: " + (" ".join(parts) if parts else "(empty substitution)"))
    if answer.note:
        lines.append(f"note: {answer.note}")
    return _emit(args, lines, obj)


def _load_problem(args, need_word=False, need_beta=False):
    alphabet = _alphabet(args)
    if args.problem:
        with open(args.problem, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        pattern_text = obj["pattern"]
        word = alphabet.word(obj["word"]) if "word" in obj else None
        beta_text = obj.get("beta")
        k = int(obj["k"])
        cap = obj.get("image_cap", args.image_cap)
    else:
        pattern_text = args.pattern
        word = alphabet.word(args.word) if need_word else None
        beta_text = args.beta if need_beta else None
        k = args.k
        cap = args.image_cap
    if pattern_text is None:
        raise ValueError("missing pattern")
    if beta_text is not None:
        pattern, beta = Pattern.parse_pair(pattern_text, beta_text, alphabet)
    else:
        pattern, beta = Pattern.parse(pattern_text, alphabet), None
    if k is None:
        raise ValueError("missing k")
    if need_word and word is None:
        raise ValueError("missing target word")
    if need_beta and beta is None:
        raise ValueError("missing second pattern")
    return pattern, word, beta, k, cap


def _cmd_arch(args):
    w = _alphabet(args).word(args.word)
    fact = arch_factorize(w)
    arches = "|".join(a.render() for a in fact.arches()) or "-"
    rest = _render(fact.rest())
    lines = [f"arches: {arches} rest: {rest} iota: {fact.iota}"]
    obj = {
        "arches": [a.render() for a in fact.arches()],
        "rest": fact.rest().render(),
        "iota": fact.iota,
    }
    return _emit(args, lines, obj)


def _cmd_iota(args):
    w = _alphabet(args).word(args.word)
    iota = universality_index(w)
    return _emit(args, [str(iota)], {"iota": iota})


def _cmd_congruent(args):
    alphabet = _alphabet(args)
    u, v = alphabet.word(args.u), alphabet.word(args.v)
    result = simon_congruent(u, v, args.k)
    return _emit(args, ["true" if result else "false"], {"congruent": result})


def _cmd_distinguish(args):
    alphabet = _alphabet(args)
    u, v = alphabet.word(args.u), alphabet.word(args.v)
    d = shortest_distinguisher(u, v)
    text = "inf" if d == INF else str(d)
    return _emit(args, [text], {"shortest_distinguisher": "inf" if d == INF else d})


def _cmd_signature(args):
    alphabet = _alphabet(args)
    sig = signature_of(alphabet.word(args.word))
    obj = signature_to_json(sig, alphabet)
    lines = [
        f"gamma: {obj['gamma'] or EPS}",
        f"K: {json.dumps(obj['K'], sort_keys=True)}",
        f"R: {json.dumps(obj['R'])}",
    ]
    return _emit(args, lines, obj)


def _cmd_sig_concat(args):
    alphabet = _alphabet(args)
    su = signature_from_json(json.loads(args.left), alphabet)
    sv = signature_from_json(json.loads(args.right), alphabet)
    out = signature_to_json(concat_signatures(su, sv), alphabet)
    return _emit(args, [json.dumps(out, sort_keys=True)], out)


def _cmd_sig_valid(args):
    alphabet = _alphabet(args)
    obj = json.loads(args.signature)
    sig = signature_from_json(obj, alphabet)
    verdict = validity_search(alphabet, sig.gamma, sig.counts, sig.rests, args.search_len)
    if verdict.found:
        lines = [f"valid witness={_render(verdict.witness)} shift={verdict.shift}"]
        out = {"valid": True, "witness": verdict.witness.render(), "shift": verdict.shift}
    else:
        lines = [f"not found within bound {verdict.bound}"]
        out = {"valid": False, "bound": verdict.bound}
    return _emit(args, lines, out)


def _cmd_marginal(args):
    w = _alphabet(args).word(args.word)
    ms = marginal_sequence(w)
    lines = [f"m: {' '.join(str(t) for t in ms.terms)} m_inf: {ms.last}"]
    obj = {"terms": list(ms.terms), "m_inf": ms.last, "gamma": w.alphabet.render(ms.gamma)}
    return _emit(args, lines, obj)


def _cmd_oracle(args):
    if args.kind != "subseq-set":
        raise ValueError(f"unknown oracle {args.kind!r}")
    alphabet = _alphabet(args)
    w = alphabet.word(args.word)
    s = subseq_set(w, args.k, max_word_len=args.word_cap, max_k=args.k_cap)
    members = [m.render() or EPS for m in s.words()]
    lines = [f"size: {len(members)}", "members: " + " ".join(members)]
    obj = {"k": s.k, "members": [m.render() for m in s.words()]}
    return _emit(args, lines, obj)


def _cmd_class_automaton(args):
    alphabet = _alphabet(args)
    w = alphabet.word(args.word)
    auto = class_automaton(w, args.k, state_cap=args.state_cap)
    obj = auto.to_json()
    lines = [f"states: {auto.num_states} target: {auto.target}"]
    return _emit(args, lines, obj)


def _cmd_match_univ(args):
    pattern, _, _, k, cap = _load_problem(args)
    answer = solve_match_univ(pattern, k, method=args.method, image_cap=cap, search_len=args.search_len)
    return _answer_output(args, answer, pattern)


def _cmd_match_simon(args, strict: bool):
    pattern, word, _, k, cap = _load_problem(args, need_word=True)
    answer = solve_match_simon(
        pattern, word, k, strict=strict, method=args.method, image_cap=cap, state_cap=args.state_cap
    )
    return _answer_output(args, answer, pattern)


def _cmd_we(args, strict: bool):
    pattern, _, beta, k, cap = _load_problem(args, need_beta=True)
    if strict:
        answer = we_strict_simon(pattern, beta, k, cap)
    else:
        answer = we_simon(pattern, beta, k, cap)
    merged = Pattern(
        pattern.symbols + beta.symbols, pattern.var_names, pattern.alphabet
    )
    return _answer_output(args, answer, merged)


_REDUCE_KINDS = {
    "sat2univ": "match_univ",
    "sat2strict": "match_strict_simon",
    "sat2we": "we_strict_simon",
}


def _cmd_reduce(args):
    with open(args.dimacs, "r", encoding="utf-8") as fh:
        formula = parse_dimacs(fh.read(), pad_duplicates=args.pad_duplicates)
    blowup = None if args.blowup == "auto" else int(args.blowup)
    instance = build_instance(_REDUCE_KINDS[args.kind], formula, blowup)
    obj = instance.to_json()
    lines = [
        f"pattern: {instance.pattern.render()}",
        json.dumps(
            {"n": instance.n, "m": instance.m, "k": instance.k, "B": instance.blowup,
             "lemma": instance.kind},
            sort_keys=True,
        ),
    ]
    return _emit(args, lines, obj)


def _cmd_decode(args):
    with open(args.instance, "r", encoding="utf-8") as fh:
        instance = GadgetInstance.from_json(json.load(fh))
    with open(args.sub, "r", encoding="utf-8") as fh:
        h = Substitution.from_json(json.load(fh), instance.pattern)
    for v in instance.pattern.variables():
        h.images.setdefault(v, Word((), instance.pattern.alphabet))
    result = decode_assignment(instance, h)
    if result.ok:
        rendered = " ".join(
            f"x{i}={'true' if val else 'false'}" for i, val in sorted(result.assignment.items())
        )
        obj = {"ok": True, "assignment": {str(i): v for i, v in sorted(result.assignment.items())}}
        return _emit(args, [rendered], obj)
    lines = ["decode failed:"] + [f"  {d}" for d in result.diagnostics]
    obj = {"ok": False, "diagnostics": list(result.diagnostics)}
    return _emit(args, lines, obj)


def _global_flags(parser, top: bool):
    # registered on the main parser with real defaults and on every
    # subparser with SUPPRESS, so they may appear on either side of the
    # subcommand without the subparser default clobbering the parsed value
    d = dict() if top else dict(default=argparse.SUPPRESS)
    parser.add_argument(
        "--alphabet", **({"default": "ab"} if top else d), help="terminal characters, in letter order"
    )
    parser.add_argument("--json", action="store_true", **d, help="structured JSON output")
    parser.add_argument("--seed", type=int, **({"default": 0} if top else d),
                        help="seed for any sampling subcommands")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simonmatch",
        description="Subsequence universality, Simon congruence, and pattern matching with variables",
    )
    _global_flags(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        p = sub.add_parser(name, **kw)
        _global_flags(p, top=False)
        return p

    p = add_parser("arch", help="greedy arch factorisation")
    p.add_argument("word")
    p.set_defaults(func=_cmd_arch)

    p = add_parser("iota", help="universality index")
    p.add_argument("word")
    p.set_defaults(func=_cmd_iota)

    p = add_parser("congruent", help="Simon k-congruence test")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=_cmd_congruent)

    p = add_parser("distinguish", help="shortest distinguishing subsequence length")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=_cmd_distinguish)

    p = add_parser("signature", help="universality signature of a word")
    p.add_argument("word")
    p.set_defaults(func=_cmd_signature)

    p = add_parser("sig-concat", help="compose two signature JSON objects")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=_cmd_sig_concat)

    p = add_parser("sig-valid", help="bounded witness search for a signature JSON object")
    p.add_argument("signature")
    p.add_argument("--search-len", type=int, default=12)
    p.set_defaults(func=_cmd_sig_valid)

    p = add_parser("marginal", help="marginal sequence of a word")
    p.add_argument("word")
    p.set_defaults(func=_cmd_marginal)

    p = add_parser("oracle", help="exhaustive desk-scale oracles")
    p.add_argument("kind", choices=["subseq-set"])
    p.add_argument("-k", type=int, required=True)
    p.add_argument("word")
    p.add_argument("--word-cap", type=int, default=16)
    p.add_argument("--k-cap", type=int, default=6)
    p.set_defaults(func=_cmd_oracle)

    p = add_parser("class-automaton", help="congruence-class automaton of a word")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("word")
    p.add_argument("--state-cap", type=int, default=100_000)
    p.set_defaults(func=_cmd_class_automaton)

    def add_problem_args(p, need_word=False, need_beta=False):
        p.add_argument("pattern", nargs="?", help="pattern text (uppercase letters are variables)")
        if need_word:
            p.add_argument("word", nargs="?")
        if need_beta:
            p.add_argument("beta", nargs="?")
        p.add_argument("-k", type=int)
        p.add_argument("--image-cap", type=int, default=None)
        p.add_argument("--search-len", type=int, default=12)
        p.add_argument("--state-cap", type=int, default=100_000)
        p.add_argument("--method", default="auto",
                       choices=["auto", "brute", "one_occurrence", "const_vars", "regular_automata"])
        p.add_argument("--problem", help="JSON problem file {pattern, word?, beta?, k, image_cap?}")

    p = add_parser("match-univ", help="substitution with an exact arch count")
    add_problem_args(p)
    p.set_defaults(func=_cmd_match_univ)

    p = add_parser("match-simon", help="substitution congruent to a target word")
    add_problem_args(p, need_word=True)
    p.set_defaults(func=lambda a: _cmd_match_simon(a, strict=False))

    p = add_parser("match-strict", help="substitution congruent at k but not k+1")
    add_problem_args(p, need_word=True)
    p.set_defaults(func=lambda a: _cmd_match_simon(a, strict=True))

    p = add_parser("we-simon", help="word equation under k-congruence")
    add_problem_args(p, need_beta=True)
    p.set_defaults(func=lambda a: _cmd_we(a, strict=False))

    p = add_parser("we-strict", help="word equation under strict k-congruence")
    add_problem_args(p, need_beta=True)
    p.set_defaults(func=lambda a: _cmd_we(a, strict=True))

    p = add_parser("reduce", help="compile a 3CNF formula to a matching instance")
    p.add_argument("kind", choices=sorted(_REDUCE_KINDS))
    p.add_argument("--dimacs", required=True)
    p.add_argument("--blowup", default="auto", help="repetition count, or 'auto'")
    p.add_argument("--pad-duplicates", action="store_true",
                   help="pad short clauses by repeating a literal")
    p.set_defaults(func=_cmd_reduce)

    p = add_parser("decode", help="read a Boolean assignment off a substitution")
    p.add_argument("--instance", required=True, help="instance JSON emitted by reduce")
    p.add_argument("--sub", required=True, help="substitution JSON {var: image}")
    p.set_defaults(func=_cmd_decode)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    random.seed(args.seed)
    try:
        if args.command == "reduce":
            args.alphabet = "".join(gadget_alphabet().render_chars)
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
