#!/usr/bin/env python3
"""Dynamic cost of the inserted transient checks.

Generates well-typed programs, runs each translation twice: once as
emitted and once with every check erased (check(e, S) replaced by e),
and compares step counts. Erasure can change the outcome: a run that
failed a cast may now finish, or hit a real error. The script reports
the step overhead over runs where both versions produce a value, plus
the outcome shifts.

Usage:
    python scripts/check_overhead.py --programs 500 --depth 5
"""

import argparse
import random
import sys

sys.path.insert(0, "src")

from anthill.generate import gen_typed_program
from anthill.runtime import CastError, PyError, Timeout, Value, run
from anthill.translate import translate_program
from anthill.upython import (
    UApp, UCheck, UClass, UGet, UInt, ULam, ULet, USet, UVar,
)


def erase_checks(e):
    if isinstance(e, UCheck):
        return erase_checks(e.subject)
    if isinstance(e, (UInt, UVar)):
        return e
    if isinstance(e, ULam):
        return ULam(e.params, erase_checks(e.body))
    if isinstance(e, UApp):
        return UApp(erase_checks(e.fn),
                    tuple(erase_checks(a) for a in e.args), e.label)
    if isinstance(e, ULet):
        return ULet(e.name, erase_checks(e.bound), erase_checks(e.body))
    if isinstance(e, UGet):
        return UGet(erase_checks(e.subject), e.attr, e.label)
    if isinstance(e, USet):
        return USet(erase_checks(e.subject), e.attr,
                    erase_checks(e.value), e.label)
    if isinstance(e, UClass):
        return UClass(e.name,
                      tuple(erase_checks(s) for s in e.supers),
                      tuple((x, erase_checks(m)) for x, m in e.members),
                      erase_checks(e.ctor), e.label)
    raise TypeError(f"unexpected node {e!r}")


def outcome_name(o):
    if isinstance(o, Value):
        return "value"
    if isinstance(o, CastError):
        return "casterror"
    if isinstance(o, Timeout):
        return "timeout"
    assert isinstance(o, PyError)
    return f"pyerror-{o.label.name.lower()}"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--programs", type=int, default=500)
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--budget", type=int, default=50_000)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    shifts: dict[tuple[str, str], int] = {}
    ratios = []
    checked_steps = bare_steps = 0

    for _ in range(args.programs):
        term, _ = gen_typed_program(rng, args.depth)
        target, _ = translate_program(term)
        full = run(target, budget=args.budget)
        bare = run(erase_checks(target), budget=args.budget)
        pair = (outcome_name(full), outcome_name(bare))
        shifts[pair] = shifts.get(pair, 0) + 1
        if pair == ("value", "value"):
            checked_steps += full.steps
            bare_steps += bare.steps
            if bare.steps:
                ratios.append(full.steps / bare.steps)

    print(f"{args.programs} programs at depth {args.depth}, "
          f"seed {args.seed}")
    print("outcome (with checks -> without):")
    for (a, b), n in sorted(shifts.items(), key=lambda kv: -kv[1]):
        marker = "" if a == b else "   <- shifted"
        print(f"  {a:>18} -> {b:<18} {n:6d}{marker}")
    if ratios:
        ratios.sort()
        mean = sum(ratios) / len(ratios)
        median = ratios[len(ratios) // 2]
        print(f"step overhead on value/value runs: mean x{mean:.2f}, "
              f"median x{median:.2f}, worst x{ratios[-1]:.2f}")
        print(f"total steps with checks {checked_steps}, "
              f"without {bare_steps}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
