"""
VSBraid - Seeded Suite Tests
=============================
"""

import pytest

from vsb.errors import PreconditionError
from vsb.randomized import (
    DEFAULT_SEED,
    SUITES,
    WordSampler,
    braiding_suite,
    homomorphism_suite,
    markov_suite,
    presentation_suite,
    run_suites,
)


def test_sampler_is_reproducible():
    a, b = WordSampler(11), WordSampler(11)
    assert [a.sized_word(5, 8) for _ in range(20)] == [b.sized_word(5, 8) for _ in range(20)]


def test_sampler_respects_bounds():
    sampler = WordSampler(3)
    for _ in range(200):
        x = sampler.sized_word(4, 6)
        assert 1 <= x.n <= 4
        assert len(x) <= 6


def test_presentation_suite():
    report = presentation_suite(WordSampler(DEFAULT_SEED))
    assert report.ok, report.failures
    assert report.checked > 0


def test_presentation_suite_draws_its_contexts_from_the_sampler():
    sampler = WordSampler(DEFAULT_SEED)
    presentation_suite(sampler, max_n=3, contexts=2)
    assert sampler.below(2**32) != WordSampler(DEFAULT_SEED).below(2**32)


@pytest.mark.parametrize("seed", [5, 6])
def test_presentation_suite_holds_between_random_words(seed):
    report = presentation_suite(WordSampler(seed), max_n=4, contexts=5, max_len=8)
    assert report.ok, report.failures


def test_homomorphism_suite():
    report = homomorphism_suite(WordSampler(DEFAULT_SEED), count=100)
    assert report.ok, report.failures
    assert report.checked == 100


def test_markov_suite():
    report = markov_suite(WordSampler(DEFAULT_SEED))
    assert report.ok, report.failures
    assert report.checked >= 500


def test_braiding_suite():
    report = braiding_suite(WordSampler(DEFAULT_SEED))
    assert report.ok, report.failures
    assert report.checked == 100


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_other_seeds(seed):
    for report in run_suites(seed, ["homomorphism", "braiding"]):
        assert report.ok, report.failures


def test_run_suites_is_deterministic():
    first = [str(r) for r in run_suites(5, ["homomorphism"])]
    assert first == [str(r) for r in run_suites(5, ["homomorphism"])]


def test_suite_registry():
    assert [r.name for r in run_suites(DEFAULT_SEED, ["presentation"])] == ["presentation"]
    assert set(SUITES) == {"presentation", "homomorphism", "markov", "braiding"}


def test_unknown_suite():
    with pytest.raises(PreconditionError, match="unknown suite"):
        run_suites(1, ["nope"])
