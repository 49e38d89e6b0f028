"""
VSBraid - Seeded Suites
========================
Randomised conservation checks. Words come from numpy's PCG64 bit generator,
read as raw 64-bit outputs reduced modulo the bound, so a seed reproduces the
same words on every platform.

  presentation   every relation of n = 2..6 keeps perm, tau count, sigma sum and
                 closure component count, bare and between random words
  homomorphism   perm / tau count / sigma sum of a*b from those of a and b
  markov         each move keeps tau count and component count; only real
                 stabilisation moves the sigma sum; Forward then Inverse is the identity
  braiding       close(w) and close(braid(close(w))) share every count but virtual,
                 and braid(close(w)) stays on w.n strands
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from vsb.diagram import braid, close, invariants
from vsb.errors import PreconditionError
from vsb.markov import MarkovKind, MarkovMove, apply_markov, embed_right, left_shift
from vsb.relations import relation_set
from vsb.words import (
    BraidWord,
    GeneratorLetter,
    LetterKind,
    closure_component_count,
    compose,
    permutation_image,
    sigma_exponent_sum,
    tau,
    tau_count,
    virtual,
)

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240601


class WordSampler:
    def __init__(self, seed: int = DEFAULT_SEED):
        self._bits = np.random.PCG64(seed)

    def below(self, bound: int) -> int:
        return int(self._bits.random_raw()) % bound

    def word(self, n: int, max_len: int) -> BraidWord:
        if n < 2:
            return BraidWord(n, ())
        length = self.below(max_len + 1)
        letters = [
            GeneratorLetter(LetterKind(self.below(4)), 1 + self.below(n - 1))
            for _ in range(length)
        ]
        return BraidWord(n, tuple(letters))

    def sized_word(self, max_n: int, max_len: int, min_n: int = 1) -> BraidWord:
        n = min_n + self.below(max_n - min_n + 1)
        return self.word(n, max_len)


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(message)

    def __str__(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        return f"{self.name}: {self.checked} checked, {status}"


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def presentation_suite(sampler: WordSampler, max_n: int = 6, contexts: int = 3, max_len: int = 6) -> SuiteReport:
    """Each relation bare, then inside `contexts` random words u . side . v."""
    report = SuiteReport("presentation")
    checks = (
        ("perm", permutation_image),
        ("tau", tau_count),
        ("sigma", sigma_exponent_sum),
        ("components", closure_component_count),
    )
    for n in range(2, max_n + 1):
        for rel in relation_set(n):
            lhs, rhs = (BraidWord(n, side) for side in rel.sides())
            report.checked += 1
            pairs = [(BraidWord(n), BraidWord(n))]
            pairs += [(sampler.word(n, max_len), sampler.word(n, max_len)) for _ in range(contexts)]
            for u, v in pairs:
                left, right = compose(compose(u, lhs), v), compose(compose(u, rhs), v)
                for name, fn in checks:
                    if fn(left) != fn(right):
                        report.fail(f"{rel} on {n} strands changes {name} between {u} and {v}")
    return report


def homomorphism_suite(sampler: WordSampler, count: int = 200, max_n: int = 5, max_len: int = 10) -> SuiteReport:
    report = SuiteReport("homomorphism")
    for _ in range(count):
        n = 2 + sampler.below(max_n - 1)
        a, b = sampler.word(n, max_len), sampler.word(n, max_len)
        ab = compose(a, b)
        report.checked += 1
        if permutation_image(ab) != permutation_image(a).then(permutation_image(b)):
            report.fail(f"perm({a} * {b}) on {n} strands")
        if tau_count(ab) != tau_count(a) + tau_count(b):
            report.fail(f"tau({a} * {b})")
        if sigma_exponent_sum(ab) != sigma_exponent_sum(a) + sigma_exponent_sum(b):
            report.fail(f"sigma({a} * {b})")
    return report


def _move_catalogue(w: BraidWord) -> List[tuple]:
    """(word, move) pairs covering every move kind, with inputs shaped so the move applies."""
    pairs = []
    if w.letters:
        first = w.letters[0]
        if first.kind is LetterKind.VIRTUAL:
            pairs.append((w, MarkovMove(MarkovKind.CONJ_VIRTUAL, index=first.index)))
        elif first.kind is LetterKind.SINGULAR:
            pairs.append((w, MarkovMove(MarkovKind.COMMUTE_SINGULAR, index=first.index)))
        else:
            sign = 1 if first.kind is LetterKind.REAL_POS else -1
            pairs.append((w, MarkovMove(MarkovKind.CONJ_REAL, sign=sign, index=first.index)))
    pairs.append((w, MarkovMove(MarkovKind.STAB_VIRTUAL_RIGHT)))
    pairs.append((w, MarkovMove(MarkovKind.STAB_REAL_RIGHT, sign=1)))
    pairs.append((w, MarkovMove(MarkovKind.STAB_REAL_RIGHT, sign=-1)))
    pairs.append((apply_markov(w, MarkovMove(MarkovKind.STAB_VIRTUAL_RIGHT)), MarkovMove(MarkovKind.DESTAB_RIGHT)))
    if w.n >= 2:
        pairs.append((w, MarkovMove(MarkovKind.UNDER_THREAD_RIGHT)))
        pairs.append((w, MarkovMove(MarkovKind.UNDER_THREAD_LEFT)))
        wide, k = embed_right(w), w.n
        shifted = left_shift(w)
        for sign in (1, -1):
            real = GeneratorLetter(LetterKind.REAL_POS if sign == 1 else LetterKind.REAL_NEG, k)
            right = BraidWord(k + 1, wide.letters + (tau(k), virtual(k - 1), real))
            pairs.append((right, MarkovMove(MarkovKind.RS_THREAD_RIGHT, sign=sign)))
            real1 = GeneratorLetter(real.kind, 1)
            left = BraidWord(k + 1, shifted.letters + (tau(1), virtual(2), real1))
            pairs.append((left, MarkovMove(MarkovKind.RS_THREAD_LEFT, sign=sign)))
    return pairs


def markov_suite(sampler: WordSampler, count: int = 500, max_n: int = 5, max_len: int = 12) -> SuiteReport:
    report = SuiteReport("markov")
    for _ in range(count):
        w = sampler.sized_word(max_n, max_len)
        for word, move in _move_catalogue(w):
            try:
                out = apply_markov(word, move)
            except PreconditionError as e:
                report.fail(f"{move} refused {word} on {word.n} strands: {e}")
                continue
            report.checked += 1
            if tau_count(out) != tau_count(word):
                report.fail(f"{move} changed tau count of {word}")
            if closure_component_count(out) != closure_component_count(word):
                report.fail(f"{move} changed component count of {word} on {word.n} strands")
            expected = move.sign if move.kind is MarkovKind.STAB_REAL_RIGHT else 0
            if sigma_exponent_sum(out) - sigma_exponent_sum(word) != expected:
                report.fail(f"{move} moved the sigma sum of {word} wrongly")
            if move.kind is MarkovKind.DESTAB_RIGHT:
                continue
            try:
                back = apply_markov(out, move.reversed())
            except PreconditionError as e:
                report.fail(f"{move} has no inverse on {out}: {e}")
                continue
            if back != word:
                report.fail(f"{move} then its inverse gave {back}, not {word}")
    return report


def braiding_suite(sampler: WordSampler, count: int = 100, max_n: int = 3, max_len: int = 6) -> SuiteReport:
    report = SuiteReport("braiding")
    for _ in range(count):
        w = sampler.sized_word(max_n, max_len)
        d = close(w)
        before = invariants(d)
        out = braid(d)
        after = invariants(close(out))
        report.checked += 1
        if before.without_virtual() != after.without_virtual():
            report.fail(f"braid(close({w})) on {w.n} strands: {before} became {after}")
        if before.component_count != closure_component_count(w):
            report.fail(f"close({w}) has {before.component_count} components")
        if out.n != w.n:
            report.fail(f"braid(close({w})) moved from {w.n} to {out.n} strands")
    return report


SUITES: Dict[str, Callable[[WordSampler], SuiteReport]] = {
    "presentation": presentation_suite,
    "homomorphism": homomorphism_suite,
    "markov": markov_suite,
    "braiding": braiding_suite,
}


def run_suites(seed: int = DEFAULT_SEED, names: Optional[Sequence[str]] = None) -> List[SuiteReport]:
    chosen = list(names) if names else list(SUITES)
    unknown = [name for name in chosen if name not in SUITES]
    if unknown:
        raise PreconditionError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    reports = []
    for name in chosen:
        report = SUITES[name](WordSampler(seed))
        log.info("[random] seed %d %s", seed, report)
        reports.append(report)
    return reports
