"""
VSBraid - Lemma Catalog
========================
The identities that reduce the full presentation to the reduced one, checked
on concrete strand indices.

  lemma1 (i,j) |i-j|>=2       v_i..v_j..v_i = v_j..v_i..v_j
  lemma2 (i,j) |i-j|>1        g_i v_j = v_j g_i             g = sigma | sigma_inv | tau
  lemma3 (i,j) |i-j|>1        s_i s_j = s_j s_i, t_i t_j = t_j t_i, s_i t_j = t_j s_i
  lemma4 (i,j) |i-j|=1        s_i s_j s_i = s_j s_i s_j
  lemma5 (i,j) |i-j|=1        s_j s_i t_j = t_i s_j s_i
  lemma6 (i)                  s_i S_i = 1
  lemma7 (i)                  t_i s_i = s_i t_i
  lemma8 (i,j) |i-j|=1        v_i g_j v_i = v_j g_i v_j     g = sigma | tau

Both sides are expanded into the reduced alphabet, then connected either by
replaying a bundled rewrite script (scripts/<lemma>[_<variant>]__<i>_<j>.json)
or by the bounded search over the reduced relations.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from vsb import config
from vsb.errors import BraidError, PreconditionError
from vsb.reduced import expand_letter, expand_to_reduced, reduced_relation_set, shift_identity_sides
from vsb.relations import RelationFamily, RelationId, equivalent_bounded, relation_set
from vsb.rewriting import (
    RewriteScript,
    RewriteStep,
    RuleIndex,
    check_rewrite_script,
    load_script,
    mirrored,
    shifted_steps,
)
from vsb.search import SearchBudget
from vsb.verdicts import Failed, Verified
from vsb.words import BraidWord, GeneratorLetter, LetterKind, Letters, sigma, sigma_inv, tau, virtual

log = logging.getLogger(__name__)


class LemmaId(str, Enum):
    LEMMA1 = "lemma1"
    LEMMA2 = "lemma2"
    LEMMA3 = "lemma3"
    LEMMA4 = "lemma4"
    LEMMA5 = "lemma5"
    LEMMA6 = "lemma6"
    LEMMA7 = "lemma7"
    LEMMA8 = "lemma8"


class VerifyMode(str, Enum):
    SCRIPT = "script"
    SEARCH = "search"


VARIANTS: Dict[LemmaId, Tuple[str, ...]] = {
    LemmaId.LEMMA2: ("sigma", "sigma_inv", "tau"),
    LemmaId.LEMMA3: ("sigma_sigma", "tau_tau", "sigma_tau"),
    LemmaId.LEMMA8: ("sigma", "tau"),
}
_VARIANT_ALIASES = {"s": "sigma", "S": "sigma_inv", "t": "tau", "ss": "sigma_sigma", "tt": "tau_tau", "st": "sigma_tau"}
_KIND_OF = {"sigma": LetterKind.REAL_POS, "sigma_inv": LetterKind.REAL_NEG, "tau": LetterKind.SINGULAR}

_SINGLE_INDEX = {LemmaId.LEMMA6, LemmaId.LEMMA7}
_ADJACENT = {LemmaId.LEMMA4, LemmaId.LEMMA5, LemmaId.LEMMA8}


def parse_lemma(text: str) -> LemmaId:
    value = text.strip().lower()
    if value.isdigit():
        value = f"lemma{value}"
    try:
        return LemmaId(value)
    except ValueError:
        raise PreconditionError(f"unknown lemma {text!r}; expected lemma1..lemma8") from None


def normalize_variant(lemma: LemmaId, variant: Optional[str]) -> Optional[str]:
    allowed = VARIANTS.get(lemma)
    if allowed is None:
        if variant:
            raise PreconditionError(f"{lemma.value} has no variants")
        return None
    if not variant:
        return allowed[0]
    value = _VARIANT_ALIASES.get(variant, variant)
    if value not in allowed:
        raise PreconditionError(f"{lemma.value} variant must be one of {', '.join(allowed)}, got {variant!r}")
    return value


def _check_indices(lemma: LemmaId, indices: Sequence[int], n: int) -> Tuple[int, ...]:
    indices = tuple(int(k) for k in indices)
    expected = 1 if lemma in _SINGLE_INDEX else 2
    if len(indices) != expected:
        raise PreconditionError(f"{lemma.value} takes {expected} index(es), got {len(indices)}")
    if min(indices) < 1 or max(indices) > n - 1:
        raise PreconditionError(f"{lemma.value}: indices {indices} must lie in 1..{n - 1}")
    if expected == 2:
        gap = abs(indices[0] - indices[1])
        if lemma in _ADJACENT and gap != 1:
            raise PreconditionError(f"{lemma.value} needs |i-j| = 1")
        if lemma is LemmaId.LEMMA1 and gap < 2:
            raise PreconditionError("lemma1 needs |i-j| >= 2")
        if lemma in (LemmaId.LEMMA2, LemmaId.LEMMA3) and gap <= 1:
            raise PreconditionError(f"{lemma.value} needs |i-j| > 1")
    return indices


def lemma_sides(lemma: LemmaId, indices: Sequence[int], n: int, variant: Optional[str] = None) -> Tuple[BraidWord, BraidWord]:
    """Both sides of the identity in the full alphabet, before expansion."""
    variant = normalize_variant(lemma, variant)
    idx = _check_indices(lemma, indices, n)

    def word(*letters: GeneratorLetter) -> BraidWord:
        return BraidWord(n, letters)

    if lemma is LemmaId.LEMMA1:
        return shift_identity_sides(idx[0], idx[1], n)
    if lemma is LemmaId.LEMMA6:
        i = idx[0]
        return word(sigma(i), sigma_inv(i)), word()
    if lemma is LemmaId.LEMMA7:
        i = idx[0]
        return word(tau(i), sigma(i)), word(sigma(i), tau(i))
    i, j = idx
    if lemma is LemmaId.LEMMA2:
        g = GeneratorLetter(_KIND_OF[variant], i)
        return word(g, virtual(j)), word(virtual(j), g)
    if lemma is LemmaId.LEMMA3:
        first, second = {"sigma_sigma": (sigma, sigma), "tau_tau": (tau, tau), "sigma_tau": (sigma, tau)}[variant]
        return word(first(i), second(j)), word(second(j), first(i))
    if lemma is LemmaId.LEMMA4:
        return word(sigma(i), sigma(j), sigma(i)), word(sigma(j), sigma(i), sigma(j))
    if lemma is LemmaId.LEMMA5:
        return word(sigma(j), sigma(i), tau(j)), word(tau(i), sigma(j), sigma(i))
    # lemma8
    kind = _KIND_OF[variant]
    return (
        word(virtual(i), GeneratorLetter(kind, j), virtual(i)),
        word(virtual(j), GeneratorLetter(kind, i), virtual(j)),
    )


def default_mode(lemma: LemmaId, variant: Optional[str] = None) -> VerifyMode:
    if lemma in _SINGLE_INDEX or (lemma is LemmaId.LEMMA3 and variant == "sigma_tau"):
        return VerifyMode.SEARCH
    return VerifyMode.SCRIPT


# ---------------------------------------------------------------------------
# Bundled scripts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaInstance:
    lemma: LemmaId
    variant: Optional[str]
    indices: Tuple[int, ...]
    n: int
    path: Path

    @property
    def label(self) -> str:
        name = self.lemma.value + (f"[{self.variant}]" if self.variant else "")
        return f"{name}({','.join(str(k) for k in self.indices)})"

    def sort_key(self):
        return (self.lemma.value, self.variant or "", self.indices)


def script_path(lemma: LemmaId, indices: Sequence[int], variant: Optional[str] = None, scripts_dir: Optional[Path] = None) -> Path:
    stem = lemma.value + (f"_{variant}" if variant else "")
    name = f"{stem}__{'_'.join(str(k) for k in indices)}.json"
    return Path(scripts_dir or config.SCRIPTS_DIR) / name


@lru_cache(maxsize=8)
def _catalog(scripts_dir: str) -> Tuple[Tuple[LemmaInstance, RewriteScript], ...]:
    entries = []
    for path in sorted(Path(scripts_dir).glob("*.json")):
        script = load_script(path)
        if not script.lemma:
            log.warning("[lemmas] %s carries no lemma id, skipped", path.name)
            continue
        lemma = parse_lemma(script.lemma)
        instance = LemmaInstance(lemma, script.variant, tuple(script.indices), script.n, path)
        entries.append((instance, script))
    entries.sort(key=lambda entry: entry[0].sort_key())
    return tuple(entries)


def lemma_instances(n: int, scripts_dir: Optional[Path] = None) -> List[LemmaInstance]:
    """Every bundled instance that fits on n strands, in catalog order."""
    return [inst for inst, _ in _catalog(str(scripts_dir or config.SCRIPTS_DIR)) if inst.n <= n]


def _endpoints(script: RewriteScript) -> Tuple[Letters, Letters]:
    return script.start.letters, script.end.letters


def find_script(a: BraidWord, b: BraidWord, scripts_dir: Optional[Path] = None) -> Optional[RewriteScript]:
    """A bundled script whose endpoints are a and b, in either order."""
    wanted = {(a.letters, b.letters), (b.letters, a.letters)}
    for _, script in _catalog(str(scripts_dir or config.SCRIPTS_DIR)):
        if script.n <= a.n and _endpoints(script) in wanted:
            return script.widened(a.n)
    return None


def _replay(script: RewriteScript, lhs: BraidWord, rhs: BraidWord, n: int) -> Union[Verified, Failed]:
    if script.n > n:
        return Failed(f"script needs {script.n} strands, only {n} given")
    script = script.widened(n)
    if _endpoints(script) not in {(lhs.letters, rhs.letters), (rhs.letters, lhs.letters)}:
        return Failed("script endpoints are not the expanded sides of the identity")
    verdict = check_rewrite_script(script, reduced_relation_set(n))
    if not verdict.ok:
        return Failed(f"script {verdict}")
    return Verified(f"script, {len(script)} steps")


def _search(lhs: BraidWord, rhs: BraidWord, n: int, budget: Optional[SearchBudget]) -> Union[Verified, Failed]:
    result = equivalent_bounded(lhs, rhs, reduced_relation_set(n), budget)
    if result.found:
        return Verified(f"search, {len(result.witness)} steps")
    if result.proven_inequivalent:
        return Failed(f"sides are inequivalent ({result.reason})")
    return Failed(f"not connected within budget ({result.states_explored} states)")


def verify_lemma(
    lemma: Union[LemmaId, str],
    indices: Sequence[int],
    n: int,
    mode: Optional[Union[VerifyMode, str]] = None,
    budget: Optional[SearchBudget] = None,
    variant: Optional[str] = None,
    scripts_dir: Optional[Path] = None,
) -> Union[Verified, Failed]:
    lemma = parse_lemma(lemma) if isinstance(lemma, str) else lemma
    variant = normalize_variant(lemma, variant)
    lhs, rhs = (expand_to_reduced(w) for w in lemma_sides(lemma, indices, n, variant))
    path = script_path(lemma, indices, variant, scripts_dir)

    chosen = VerifyMode(mode) if mode else default_mode(lemma, variant)
    if chosen is VerifyMode.SCRIPT:
        if path.exists():
            return _replay(load_script(path), lhs, rhs, n)
        if mode:
            return Failed(f"no bundled script {path.name}")
        log.info("[lemmas] no script for %s, searching instead", path.name)
    return _search(lhs, rhs, n, budget)


# ---------------------------------------------------------------------------
# Batch checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaResult:
    lemma: LemmaId
    variant: Optional[str]
    indices: Tuple[int, ...]
    mode: VerifyMode
    verdict: Union[Verified, Failed]

    @property
    def label(self) -> str:
        name = self.lemma.value + (f"[{self.variant}]" if self.variant else "")
        return f"{name}({','.join(str(k) for k in self.indices)})"

    def sort_key(self):
        return (self.lemma.value, self.variant or "", self.indices, self.mode.value)


def _run_lemma(job) -> LemmaResult:
    lemma, variant, indices, mode, n, budget, scripts_dir = job
    try:
        verdict = verify_lemma(lemma, indices, n, mode, budget, variant, scripts_dir)
    except BraidError as e:
        verdict = Failed(str(e))
    return LemmaResult(lemma, variant, indices, mode, verdict)


def verify_all(
    n: int,
    workers: Optional[int] = None,
    budget: Optional[SearchBudget] = None,
    scripts_dir: Optional[Path] = None,
) -> List[LemmaResult]:
    """Replay every bundled script that fits n, plus searches for lemma6/lemma7 at i = 1..3."""
    jobs = [
        (inst.lemma, inst.variant, inst.indices, VerifyMode.SCRIPT, n, budget, scripts_dir)
        for inst in lemma_instances(n, scripts_dir)
    ]
    for lemma in (LemmaId.LEMMA6, LemmaId.LEMMA7):
        for i in range(1, min(3, n - 1) + 1):
            jobs.append((lemma, None, (i,), VerifyMode.SEARCH, n, budget, scripts_dir))

    results = []
    with ThreadPoolExecutor(max_workers=workers or config.VERIFY_WORKERS) as pool:
        futures = {pool.submit(_run_lemma, job): job for job in jobs}
        for k, fut in enumerate(as_completed(futures)):
            result = fut.result()
            results.append(result)
            log.info("[lemmas] [%d/%d] %s %s: %s", k + 1, len(jobs), result.label, result.mode.value, result.verdict)
    results.sort(key=LemmaResult.sort_key)
    return results


@dataclass(frozen=True)
class ReductionResult:
    relation: RelationId
    verdict: Union[Verified, Failed]


def _undo(steps: Sequence[RewriteStep]) -> Tuple[RewriteStep, ...]:
    return tuple(step.reversed() for step in reversed(steps))


def _oriented(script: RewriteScript, start: BraidWord) -> RewriteScript:
    return script if script.start.letters == start.letters else script.inverted()


def _cancelling(index: RuleIndex, letters: Letters) -> Optional[Tuple[RewriteStep, ...]]:
    """Steps deleting letters entirely, or None when something survives."""
    rest, steps = index.cancel(letters)
    return None if rest else tuple(steps)


def _bundled(lhs: BraidWord, rhs: BraidWord, rels, scripts_dir) -> Tuple[Optional[RewriteScript], str]:
    script = find_script(lhs, rhs, scripts_dir)
    if script is not None and check_rewrite_script(script, rels).ok:
        return _oriented(script, lhs), f"script {script.lemma}, {len(script)} steps"
    script = find_script(BraidWord(lhs.n, lhs.letters[::-1]), BraidWord(rhs.n, rhs.letters[::-1]), scripts_dir)
    if script is not None and check_rewrite_script(script, rels).ok:
        try:
            script = mirrored(script, rels)
        except PreconditionError as e:
            log.debug("[lemmas] cannot mirror %s: %s", script.lemma, e)
            return None, ""
        return _oriented(script, lhs), f"mirrored script {script.lemma}, {len(script)} steps"
    return None, ""


def _through_inverse(rel: RelationId, n: int, index: RuleIndex, budget: SearchBudget, scripts_dir) -> Optional[RewriteScript]:
    """g_i h_j = h_j g_i with a negative crossing, from the same commutation with that crossing positive.

    With D deriving g X = X g: insert the cancelling pair next to the
    negative crossing, run D backwards across it, cancel the leftover pair.
    """
    if rel.family is not RelationFamily.FAR_COMM:
        return None
    left, right = rel.sides()[0]
    negative = LetterKind.REAL_NEG
    if left.kind is negative:
        base = RelationId(RelationFamily.FAR_COMM, (left.index, right.index, int(LetterKind.REAL_POS), int(right.kind)))
    elif right.kind is negative:
        base = RelationId(RelationFamily.FAR_COMM, (left.index, right.index, int(left.kind), int(LetterKind.REAL_POS)))
    else:
        return None
    derivation, _ = _derivation(base, n, index, budget, scripts_dir)
    if derivation is None:
        return None
    back = derivation.inverted().steps
    g, x = (expand_letter(letter) for letter in base.sides()[0])
    if left.kind is negative:
        g_inv = expand_letter(left)
        insert, remove = _cancelling(index, g + g_inv), _cancelling(index, g_inv + g)
        if insert is None or remove is None:
            return None
        # G X -> G X g G -> G g X G -> X G
        steps = shifted_steps(_undo(insert), len(g_inv) + len(x)) + shifted_steps(back, len(g_inv)) + remove
        start, end = g_inv + x, x + g_inv
    else:
        x_inv = expand_letter(right)
        insert, remove = _cancelling(index, x_inv + x), _cancelling(index, x + x_inv)
        if insert is None or remove is None:
            return None
        # g X' -> X' X g X' -> X' g X X' -> X' g
        steps = _undo(insert) + shifted_steps(back, len(x_inv)) + shifted_steps(remove, len(x_inv) + len(g))
        start, end = g + x_inv, x_inv + g
    return RewriteScript(n, BraidWord(n, start), steps, BraidWord(n, end))


def _derivation(rel: RelationId, n: int, index: RuleIndex, budget: SearchBudget, scripts_dir) -> Tuple[Optional[RewriteScript], str]:
    """A reduced derivation from the expanded left side to the expanded right side, and how it was found."""
    lhs, rhs = (expand_to_reduced(BraidWord(n, side)) for side in rel.sides())
    if lhs == rhs:
        return RewriteScript(n, lhs, (), rhs), "identical after expansion"
    (left_rest, head), (right_rest, tail) = index.cancel(lhs.letters), index.cancel(rhs.letters)
    if left_rest == right_rest:
        return RewriteScript(n, lhs, tuple(head) + _undo(tail), rhs), "equal after cancellation"

    rels = reduced_relation_set(n)
    script, detail = _bundled(lhs, rhs, rels, scripts_dir)
    if script is not None:
        return script, detail
    script = _through_inverse(rel, n, index, budget, scripts_dir)
    if script is not None:
        verdict = check_rewrite_script(script, rels)
        if verdict.ok:
            return script, f"through the inverse crossing, {len(script)} steps"
        log.warning("[lemmas] derived script for %s is %s", rel, verdict)

    result = equivalent_bounded(lhs, rhs, rels, budget)
    if result.found:
        return result.witness, f"search, {len(result.witness)} steps"
    if result.proven_inequivalent:
        return None, f"sides are inequivalent ({result.reason})"
    return None, f"no bundled or derived script, and search found nothing in {result.states_explored} of {budget.max_states} states"


def _connect(rel: RelationId, n: int, index: RuleIndex, budget: SearchBudget, scripts_dir) -> ReductionResult:
    script, detail = _derivation(rel, n, index, budget, scripts_dir)
    return ReductionResult(rel, Verified(detail) if script is not None else Failed(detail))


def verify_reduction(
    n: int,
    max_index: int = 3,
    budget: Optional[SearchBudget] = None,
    workers: Optional[int] = None,
    scripts_dir: Optional[Path] = None,
    max_states: Optional[int] = None,
) -> List[ReductionResult]:
    """Every original relation with indices <= max_index, expanded and connected in the reduced presentation."""
    rels = [rel for rel in relation_set(n) if rel.max_index() <= max_index]
    index = RuleIndex(reduced_relation_set(n))
    outcomes: Dict[RelationId, ReductionResult] = {}
    with ThreadPoolExecutor(max_workers=workers or config.VERIFY_WORKERS) as pool:
        futures = {}
        for rel in rels:
            sides = [BraidWord(n, side) for side in rel.sides()]
            rel_budget = budget or SearchBudget.for_words(
                *(expand_to_reduced(w) for w in sides), max_states=max_states or config.REDUCTION_MAX_STATES
            )
            futures[pool.submit(_connect, rel, n, index, rel_budget, scripts_dir)] = rel
        for fut in as_completed(futures):
            result = fut.result()
            outcomes[futures[fut]] = result
            if not result.verdict.ok:
                log.info("[lemmas] %s: %s", result.relation, result.verdict)
    return [outcomes[rel] for rel in rels]


def summarize(results) -> Tuple[int, int]:
    """(verified, total)"""
    verified = sum(1 for r in results if r.verdict.ok)
    return verified, len(results)
