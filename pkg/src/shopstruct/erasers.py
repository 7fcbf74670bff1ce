"""Erasers: compact negative-keyword surrogates for whole keyword groups.

A large eraser is a set of words W; it erases every keyword whose word set
contains W.  An exact eraser erases a single keyword.  The *image* of an
eraser is the set of catalogue keywords it erases.  Replacing per-keyword
exact negatives with a few erasers whose images tile a keyword group is what
shrinks campaign negative lists.

Pipeline: enumerate candidate large erasers from word subsets of the keywords,
build the conflict graph (images intersecting), color it, keep the color class
erasing the most keywords (its images are pairwise disjoint), then pack the
chosen erasers plus exact fillers into balanced keyword groups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import CandidateLimitError, InfeasibleTargetError, InputError
from .keywords import Keyword, MatchType, NegativeKeyword, word_set


@dataclass(frozen=True)
class LargeEraser:
    """Erases every keyword whose word set includes ``words``."""

    words: frozenset[str]

    def __post_init__(self) -> None:
        if not self.words:
            raise InputError("large eraser needs at least one word")

    def to_negative(self) -> NegativeKeyword:
        return NegativeKeyword(Keyword(tuple(sorted(self.words))), MatchType.LARGE)

    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (1, tuple(sorted(self.words)))


@dataclass(frozen=True)
class ExactEraser:
    """Erases exactly one keyword."""

    keyword: Keyword

    def to_negative(self) -> NegativeKeyword:
        return NegativeKeyword(self.keyword, MatchType.EXACT)

    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (0, self.keyword.words)


Eraser = Union[LargeEraser, ExactEraser]


def erases(eraser: Eraser, keyword: Keyword) -> bool:
    if isinstance(eraser, LargeEraser):
        return eraser.words <= word_set(keyword)
    return eraser.keyword == keyword


def eraser_image(eraser: Eraser, keywords: Iterable[Keyword]) -> frozenset[Keyword]:
    return frozenset(kw for kw in keywords if erases(eraser, kw))


@dataclass(frozen=True)
class Candidate:
    """A candidate large eraser with its precomputed image."""

    eraser: LargeEraser
    image: frozenset[Keyword]

    @property
    def weight(self) -> int:
        return len(self.image)


def enumerate_candidates(
    keywords: Sequence[Keyword],
    *,
    max_words: int = 3,
    max_image: int | None = None,
) -> tuple[Candidate, ...]:
    """All useful candidate large erasers over ``keywords``.

    Candidates are word subsets (size <= max_words) of individual keywords with
    image size in [2, max_image]; a candidate is dropped when a strict subset of
    its words has the identical image (the smaller word set blocks everything
    the bigger one does and more besides, so the bigger one is redundant).
    Default max_image is ceil(sqrt(n)).  Deterministic order: image size
    descending, then lexicographic word set.
    """
    n = len(keywords)
    if max_image is None:
        max_image = max(1, math.ceil(math.sqrt(n)))
    by_word: dict[str, set[Keyword]] = {}
    for kw in keywords:
        for w in word_set(kw):
            by_word.setdefault(w, set()).add(kw)

    images: dict[frozenset[str], frozenset[Keyword]] = {}
    for kw in keywords:
        toks = sorted(word_set(kw))
        for r in range(1, min(max_words, len(toks)) + 1):
            for combo in itertools.combinations(toks, r):
                ws = frozenset(combo)
                if ws in images:
                    continue
                img: set[Keyword] | None = None
                for w in combo:
                    hits = by_word.get(w, set())
                    img = set(hits) if img is None else (img & hits)
                    if not img:
                        break
                images[ws] = frozenset(img or ())

    kept = {
        ws: img for ws, img in images.items() if 2 <= len(img) <= max_image
    }
    # Redundancy: same image reachable from a strict word subset.
    minimal: list[Candidate] = []
    for ws, img in kept.items():
        redundant = False
        if len(ws) > 1:
            for r in range(1, len(ws)):
                for sub in itertools.combinations(sorted(ws), r):
                    if kept.get(frozenset(sub)) == img:
                        redundant = True
                        break
                if redundant:
                    break
        if not redundant:
            minimal.append(Candidate(LargeEraser(ws), img))
    minimal.sort(key=lambda c: (-c.weight, tuple(sorted(c.eraser.words))))
    return tuple(minimal)


@dataclass(frozen=True)
class EraserGraph:
    """Conflict graph: one node per candidate, an edge when images intersect."""

    nodes: tuple[Candidate, ...]
    adjacency: tuple[frozenset[int], ...]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2


def build_graph(candidates: Sequence[Candidate]) -> EraserGraph:
    """Build the conflict graph via per-keyword cliques (images are small)."""
    holders: dict[Keyword, list[int]] = {}
    for idx, cand in enumerate(candidates):
        for kw in cand.image:
            holders.setdefault(kw, []).append(idx)
    adj: list[set[int]] = [set() for _ in candidates]
    for members in holders.values():
        for i, j in itertools.combinations(members, 2):
            adj[i].add(j)
            adj[j].add(i)
    return EraserGraph(tuple(candidates), tuple(frozenset(a) for a in adj))


def welsh_powell(graph: EraserGraph, *, order: str = "weight") -> tuple[int, ...]:
    """Greedy sequential coloring; every node gets the smallest free color.

    ``order`` picks the processing sequence:

    * ``"weight"`` (default): image size descending, then total neighbouring
      image weight ascending (least-conflicted heavy nodes first, so heavy
      independent erasers tend to share the first colors), then node order.
    * ``"degree"``: classic degree-descending, then node order.
    """
    n = graph.node_count
    weights = [c.weight for c in graph.nodes]
    if order == "weight":
        nbr_weight = [sum(weights[j] for j in graph.adjacency[i]) for i in range(n)]
        seq = sorted(range(n), key=lambda i: (-weights[i], nbr_weight[i], i))
    elif order == "degree":
        seq = sorted(range(n), key=lambda i: (-len(graph.adjacency[i]), i))
    else:
        raise InputError(f"unknown coloring order: {order!r}")
    colors: dict[int, int] = {}
    for i in seq:
        used = {colors[j] for j in graph.adjacency[i] if j in colors}
        c = 0
        while c in used:
            c += 1
        colors[i] = c
    return tuple(colors[i] for i in range(n))


def select_color_class(
    graph: EraserGraph, colors: Sequence[int]
) -> tuple[Candidate, ...]:
    """The color class with the greatest total image size (tie: lowest color).

    A proper coloring makes every class an independent set, so the returned
    candidates have pairwise disjoint images.
    """
    sums: dict[int, int] = {}
    for i, c in enumerate(colors):
        sums[c] = sums.get(c, 0) + graph.nodes[i].weight
    if not sums:
        return ()
    best = min(sums, key=lambda c: (-sums[c], c))
    return tuple(graph.nodes[i] for i, c in enumerate(colors) if c == best)


@dataclass(frozen=True)
class GroupPlan:
    """Keyword groups plus the erasers whose images tile each group exactly."""

    groups: tuple[frozenset[Keyword], ...]
    erasers: tuple[tuple[Eraser, ...], ...]
    target_size: int

    def __post_init__(self) -> None:
        if len(self.groups) != len(self.erasers):
            raise InputError("groups and eraser lists are misaligned")

    def keyword_count(self) -> int:
        return sum(len(g) for g in self.groups)


def make_group_plan(
    keywords: Sequence[Keyword],
    selected: Sequence[Candidate],
    *,
    target_size: int | None = None,
) -> GroupPlan:
    """Pack selected erasers plus exact fillers into balanced keyword groups.

    The selected images must be pairwise disjoint.  Groups number
    k = ceil(n / target_size); each selected eraser carries its whole image
    into one group, placed into the currently lightest group that can take it
    without passing the target (unavoidable overflow is tolerated).  Keywords
    no eraser covers become exact erasers, placed (in catalogue order) with
    the group sharing the most vocabulary, falling back to the lightest group,
    tie to the group least covered by large erasers.
    """
    n = len(keywords)
    if target_size is None:
        target_size = max(1, math.ceil(math.sqrt(n)))
    if target_size < 1:
        raise InputError(f"target size must be positive: {target_size}")
    oversize = [c for c in selected if c.weight > target_size]
    if oversize:
        worst = max(c.weight for c in oversize)
        raise InfeasibleTargetError(
            f"target size {target_size} is below the largest selected image ({worst})"
        )
    seen: set[Keyword] = set()
    for cand in selected:
        if cand.image & seen:
            raise InputError("selected eraser images overlap")
        seen.update(cand.image)

    k = max(1, math.ceil(n / target_size)) if n else 0
    if k == 0:
        return GroupPlan((), (), target_size)

    position = {kw: i for i, kw in enumerate(keywords)}
    group_kws: list[list[Keyword]] = [[] for _ in range(k)]
    group_erasers: list[list[Eraser]] = [[] for _ in range(k)]

    def size(g: int) -> int:
        return len(group_kws[g])

    ordered = sorted(
        selected,
        key=lambda c: (
            -c.weight,
            min(position[kw] for kw in c.image),
            tuple(sorted(c.eraser.words)),
        ),
    )
    for cand in ordered:
        fitting = [g for g in range(k) if size(g) + cand.weight <= target_size]
        pool = fitting or list(range(k))
        g = min(pool, key=lambda g: (size(g), g))
        group_kws[g].extend(sorted(cand.image, key=lambda kw: position[kw]))
        group_erasers[g].append(cand.eraser)

    def vocabulary(g: int) -> set[str]:
        vocab: set[str] = set()
        for kw in group_kws[g]:
            vocab.update(word_set(kw))
        return vocab

    def large_covered(g: int) -> int:
        covered: set[Keyword] = set()
        for er in group_erasers[g]:
            if isinstance(er, LargeEraser):
                covered.update(kw for kw in group_kws[g] if erases(er, kw))
        return len(covered)

    uncovered = [kw for kw in keywords if kw not in seen]
    for kw in uncovered:
        words = word_set(kw)
        open_groups = [g for g in range(k) if size(g) < target_size]
        affine = [
            (len(words & vocabulary(g)), g) for g in open_groups
        ]
        affine = [(shared, g) for shared, g in affine if shared > 0]
        if affine:
            g = min(affine, key=lambda t: (-t[0], size(t[1]), t[1]))[1]
        else:
            pool = open_groups or list(range(k))
            g = min(pool, key=lambda g: (size(g), large_covered(g), g))
        group_kws[g].append(kw)
        group_erasers[g].append(ExactEraser(kw))

    return GroupPlan(
        tuple(frozenset(g) for g in group_kws),
        tuple(tuple(e) for e in group_erasers),
        target_size,
    )


def reduce_keywords(
    members: Iterable[Keyword],
    universe: Iterable[Keyword],
    *,
    max_words: int = 3,
) -> tuple[Eraser, ...]:
    """A small eraser set erasing exactly ``members`` and nothing else in ``universe``.

    Greedy cover: strict large candidates (image inside ``members``) taken
    largest-image-first while they erase at least two uncovered keywords, then
    exact erasers for the rest.  Never longer than ``members`` itself.
    """
    member_set = frozenset(members)
    universe_list = list(universe)
    if not member_set <= set(universe_list):
        raise InputError("reduce: members must lie inside the universe")

    seen_sets: set[frozenset[str]] = set()
    strict: list[tuple[frozenset[str], frozenset[Keyword]]] = []
    for kw in sorted(member_set):
        toks = sorted(word_set(kw))
        for r in range(1, min(max_words, len(toks)) + 1):
            for combo in itertools.combinations(toks, r):
                ws = frozenset(combo)
                if ws in seen_sets:
                    continue
                seen_sets.add(ws)
                img = frozenset(k for k in universe_list if ws <= word_set(k))
                if len(img) >= 2 and img <= member_set:
                    strict.append((ws, img))
    strict.sort(key=lambda t: (-len(t[1]), tuple(sorted(t[0]))))

    chosen: list[Eraser] = []
    covered: set[Keyword] = set()
    for ws, img in strict:
        fresh = img - covered
        if len(fresh) >= 2:
            chosen.append(LargeEraser(ws))
            covered.update(img)
    for kw in sorted(member_set - covered):
        chosen.append(ExactEraser(kw))
    return tuple(chosen)


def expand(erasers: Iterable[Eraser], universe: Iterable[Keyword]) -> frozenset[Keyword]:
    """Union of the erasers' images over ``universe``; inverse of reduce."""
    universe_list = list(universe)
    out: set[Keyword] = set()
    for er in erasers:
        out.update(eraser_image(er, universe_list))
    return frozenset(out)


def exact_packing_oracle(
    candidates: Sequence[Candidate], *, limit: int = 25
) -> tuple[int, tuple[Candidate, ...]]:
    """Exhaustive max-coverage disjoint sub-collection (branch and bound).

    Only meant for small instances; refuses more than ``limit`` candidates.
    Returns (coverage, chosen candidates).
    """
    if len(candidates) > limit:
        raise CandidateLimitError(
            f"{len(candidates)} candidates exceed the oracle limit of {limit}"
        )
    order = sorted(range(len(candidates)), key=lambda i: -candidates[i].weight)
    weights = [candidates[i].weight for i in order]
    images = [candidates[i].image for i in order]
    suffix = [0] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]

    best_cov = 0
    best_pick: tuple[int, ...] = ()

    def walk(idx: int, used: frozenset[Keyword], cov: int, pick: tuple[int, ...]) -> None:
        nonlocal best_cov, best_pick
        if cov > best_cov:
            best_cov = cov
            best_pick = pick
        if idx == len(order) or cov + suffix[idx] <= best_cov:
            return
        if not (images[idx] & used):
            walk(idx + 1, used | images[idx], cov + weights[idx], pick + (idx,))
        walk(idx + 1, used, cov, pick)

    walk(0, frozenset(), 0, ())
    return best_cov, tuple(candidates[order[i]] for i in best_pick)
