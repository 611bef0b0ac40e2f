"""Open-world soundness trials.

One trial generates an arbitrary untyped one-hole context, generates a
well-typed source term over the variables the context binds at its
hole, translates the term, plugs it in, and runs the whole program.
The claim under test: no run ever produces a runtime error attributed
to translated code. Casts may fail and native code may err freely.

Each trial also asserts two internal invariants before running:
the translated term must verify at its type's tag (checked against the
tag verifier), and the plugged program must be closed. A failure there
is a bug in this package, not a counterexample, and raises.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .contexts import plug, type_context, validate_context
from .core import DYN, tag_of
from .generate import (
    TermGenConfig,
    gen_type,
    gen_typed_term,
    gen_untyped_context,
)
from .printer import print_anthill_term, print_anthill_type, print_tag, \
    print_upython
from .runtime import CastError, PyError, Timeout, Value, run
from .translate import translate_term
from .upython import Label, PYOBJ
from .verify import infer, principal_heap_type, tag_subtype, verifies

SEED_STRIDE = 1_000_000_007


class HarnessError(Exception):
    """An internal invariant failed; the trial itself is broken."""


@dataclass(frozen=True)
class TrialConfig:
    term_depth: int = 5
    ctx_depth: int = 5
    budget: int = 10_000
    gen: TermGenConfig = field(default_factory=TermGenConfig)


@dataclass(frozen=True)
class TrialReport:
    seed: int
    term_text: str
    type_text: str
    context_text: str
    binders: tuple[str, ...]
    outcome: str  # value, casterror, native-error, translated-error, timeout
    steps: int
    verdict: str  # pass or violation
    detail: str = ""

    def line(self, index: int | None = None) -> str:
        head = f"trial {index:05d} " if index is not None else ""
        return (f"{head}seed={self.seed} outcome={self.outcome} "
                f"steps={self.steps} verdict={self.verdict}")


def trial_seed(base_seed: int, index: int) -> int:
    return base_seed * SEED_STRIDE + index


def soundness_trial(seed: int, config: TrialConfig = TrialConfig()
                    ) -> TrialReport:
    rng = random.Random(seed)
    ctx = gen_untyped_context(rng, config.ctx_depth)
    validate_context(ctx.expr)

    env = {name: DYN for name in ctx.binders}
    goal = gen_type(rng, max(1, config.term_depth // 2), config.gen)
    term = gen_typed_term(rng, env, goal, config.term_depth, config.gen)
    target, term_ty = translate_term(env, term)

    report = TrialReport(
        seed=seed,
        term_text=print_anthill_term(term),
        type_text=print_anthill_type(term_ty),
        context_text=print_upython(ctx.expr),
        binders=ctx.binders,
        outcome="", steps=0, verdict="")

    hole_env = tuple((name, PYOBJ) for name in ctx.binders)
    hole_tag = tag_of(term_ty)
    if not verifies(hole_env, {}, target, hole_tag):
        raise HarnessError(
            f"seed {seed}: translated term failed tag verification at "
            f"{print_tag(hole_tag)}\nterm: {report.term_text}\n"
            f"target: {print_upython(target)}")
    outer_env, program_tag = type_context(ctx.expr, hole_env, hole_tag)
    if outer_env != ():
        raise HarnessError(
            f"seed {seed}: plugged program is open, leftover binders "
            f"{outer_env!r}\ncontext: {report.context_text}")

    outcome = run(plug(ctx.expr, target), budget=config.budget)

    if isinstance(outcome, Value):
        sigma = principal_heap_type(outcome.heap)
        got = infer((), sigma, outcome.value)
        if tag_subtype(got, program_tag):
            return replace(report, outcome="value", steps=outcome.steps,
                           verdict="pass")
        return replace(
            report, outcome="value", steps=outcome.steps,
            verdict="violation",
            detail=(f"result tag {print_tag(got)} is not below the "
                    f"program tag {print_tag(program_tag)}"))
    if isinstance(outcome, CastError):
        return replace(report, outcome="casterror", steps=outcome.steps,
                       verdict="pass")
    if isinstance(outcome, Timeout):
        return replace(report, outcome="timeout", steps=outcome.steps,
                       verdict="pass")
    assert isinstance(outcome, PyError)
    if outcome.label is Label.NATIVE:
        return replace(report, outcome="native-error", steps=outcome.steps,
                       verdict="pass")
    return replace(report, outcome="translated-error", steps=outcome.steps,
                   verdict="violation",
                   detail="runtime error attributed to translated code")


@dataclass(frozen=True)
class FuzzReport:
    base_seed: int
    config: TrialConfig
    trials: tuple[TrialReport, ...]

    @property
    def violations(self) -> tuple[TrialReport, ...]:
        return tuple(t for t in self.trials if t.verdict == "violation")

    def count(self, outcome: str) -> int:
        return sum(1 for t in self.trials if t.outcome == outcome)

    def to_text(self, verbose: bool = False) -> str:
        lines = [f"open-world soundness fuzz: {len(self.trials)} trials, "
                 f"base seed {self.base_seed}",
                 f"term depth {self.config.term_depth}, context depth "
                 f"{self.config.ctx_depth}, step budget {self.config.budget}"]
        if verbose:
            lines.extend(t.line(i) for i, t in enumerate(self.trials))
        lines.append("summary:")
        for outcome in ("value", "casterror", "native-error",
                        "translated-error", "timeout"):
            lines.append(f"  {outcome:17s} {self.count(outcome):6d}")
        lines.append(f"  {'violations':17s} {len(self.violations):6d}")
        for t in self.violations:
            lines.append(f"violation at seed {t.seed}: {t.detail}")
        return "\n".join(lines) + "\n"


def run_trials(count: int, base_seed: int = 0,
               config: TrialConfig = TrialConfig(),
               on_trial=None) -> FuzzReport:
    reports = []
    for i in range(count):
        report = soundness_trial(trial_seed(base_seed, i), config)
        reports.append(report)
        if on_trial is not None:
            on_trial(i, report)
    return FuzzReport(base_seed, config, tuple(reports))


def shrink_violation(report: TrialReport,
                     config: TrialConfig) -> TrialReport:
    """Smallest depth pair at which the same seed still misbehaves."""
    best = report
    found = False
    for total in range(2, config.term_depth + config.ctx_depth):
        for td in range(1, min(total, config.term_depth) + 1):
            cd = total - td
            if not 1 <= cd <= config.ctx_depth:
                continue
            candidate = soundness_trial(
                report.seed, replace(config, term_depth=td, ctx_depth=cd))
            if candidate.verdict == "violation":
                best = candidate
                found = True
                break
        if found:
            break
    return best


def write_reproducer(path: str, report: TrialReport,
                     config: TrialConfig) -> None:
    with open(path, "w") as fh:
        fh.write("# open-world soundness violation\n")
        fh.write(f"# seed: {report.seed}\n")
        fh.write(f"# term depth: {config.term_depth}, context depth: "
                 f"{config.ctx_depth}, budget: {config.budget}\n")
        fh.write(f"# outcome: {report.outcome} after {report.steps} steps\n")
        fh.write(f"# detail: {report.detail}\n")
        fh.write(f"# binders at hole: {', '.join(report.binders) or '-'}\n\n")
        fh.write(f"# typed term (: {report.type_text})\n")
        fh.write(report.term_text + "\n\n")
        fh.write("# untyped context\n")
        fh.write(report.context_text + "\n")
