"""Command-line interface.

Exit codes: 0 success (or equivalent), 1 semantic negative (inequivalent,
self-test failure), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path
from typing import Sequence

from .linalg import Generator, LinalgError, clifford_t_gates, format_matrix, is_unitary, parse_matrix
from .rewrite import RewriteError, decide_equiv, normalize
from .ring import RingError
from .rules import RuleError, format_step
from .synth import SynthError, flatten, synthesize
from .words import WordError, evaluate, format_word, parse_word

log = logging.getLogger("dunitary")

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def all_generators(n: int) -> list[Generator]:
    """Generators of extent <= n in a fixed order: w[1..n], then X, then H
    with (i, j) pairs in lexicographic order.  ``random`` indexes this list."""
    out = [Generator("W", i) for i in range(1, n + 1)]
    for kind in "XH":
        out += [Generator(kind, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return out


def random_word(length: int, seed: int, n: int) -> tuple[Generator, ...]:
    """Seeded word; Python's Mersenne Twister ``random.Random(seed)`` picks
    each letter with ``randrange`` over ``all_generators(n)``."""
    rng = random.Random(seed)
    gens = all_generators(n)
    return tuple(gens[rng.randrange(len(gens))] for _ in range(length))


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    return Path(arg).read_text(encoding="utf-8")


def _write_derivation(path: str | None, deriv) -> None:
    if path is None or deriv is None:
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# start: {format_word(deriv.start) or 'eps'}\n")
        fh.write(f"# end: {format_word(deriv.end) or 'eps'}\n")
        for st in deriv.iter_steps():
            fh.write(format_step(st) + "\n")


def cmd_synth(args) -> int:
    M = parse_matrix(_read_text(args.matrix))
    if not is_unitary(M):
        raise UsageError("matrix is not unitary")
    # the normal word of M^-1 evaluates to M
    word = flatten(synthesize(M.adjoint(), check=False))
    print(format_word(word))
    return EXIT_OK


def cmd_normalize(args) -> int:
    w = parse_word(args.word, args.dim)
    nf, deriv = normalize(w, certify=not args.no_cert and args.derivation is not None, n=args.dim)
    print(format_word(nf))
    _write_derivation(args.derivation, deriv)
    return EXIT_OK


def cmd_equiv(args) -> int:
    w1 = parse_word(args.word1, args.dim)
    w2 = parse_word(args.word2, args.dim)
    want_cert = args.derivation is not None and not args.no_cert
    equal, deriv = decide_equiv(w1, w2, certify=want_cert, n=args.dim)
    print("equivalent" if equal else "not equivalent")
    _write_derivation(args.derivation, deriv)
    return EXIT_OK if equal else EXIT_NEGATIVE


def cmd_eval(args) -> int:
    sys.stdout.write(format_matrix(evaluate(parse_word(args.word, args.dim), args.dim)))
    return EXIT_OK


def cmd_random(args) -> int:
    if args.length < 0:
        raise UsageError("--length must be non-negative")
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    print(format_word(random_word(args.length, args.seed, args.dim)))
    return EXIT_OK


def cmd_gates(args) -> int:
    for name, M in clifford_t_gates().items():
        print(f"# {name}")
        sys.stdout.write(format_matrix(M))
        if args.synthesize:
            print(f"# word: {format_word(flatten(synthesize(M.adjoint(), check=False))) or 'eps'}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok = run_selftest(n4_only=args.n4_only, corrupt_rule=args.corrupt_rule)
    return EXIT_OK if ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dunitary", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("synth", help="decompose a unitary matrix file into generators")
    s.add_argument("matrix", help="matrix file, or - for stdin")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("normalize", help="print the normal form of a word")
    s.add_argument("word")
    s.add_argument("--derivation", metavar="FILE", help="write the proof steps here")
    s.add_argument("--no-cert", action="store_true", help="skip certificate construction")
    s.add_argument("--dim", type=int, default=4)
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("equiv", help="decide whether two words are equal")
    s.add_argument("word1")
    s.add_argument("word2")
    s.add_argument("--derivation", metavar="FILE")
    s.add_argument("--no-cert", action="store_true")
    s.add_argument("--dim", type=int, default=4)
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("eval", help="print the matrix of a word")
    s.add_argument("word")
    s.add_argument("--dim", type=int, default=4)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("random", help="seeded random word")
    s.add_argument("--length", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dim", type=int, default=4)
    s.set_defaults(func=cmd_random)

    s = sub.add_parser("gates", help="two-qubit Clifford+T gates as matrix files")
    s.add_argument("--synthesize", action="store_true", help="also print generator words")
    s.set_defaults(func=cmd_gates)

    s = sub.add_parser("selftest", help="check the relation tables")
    s.add_argument("--n4-only", action="store_true", help="skip the n=5,6 sweeps")
    s.add_argument("--corrupt-rule", type=int, metavar="ID", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.verb in ("normalize", "equiv") and args.dim > 4:
        print(f"error: --dim {args.dim} exceeds 4 (rewriting covers n <= 4)", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (UsageError, WordError, LinalgError, RingError, SynthError, RewriteError,
            RuleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
