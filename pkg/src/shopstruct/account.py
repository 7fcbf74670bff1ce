"""Account data model: rules, product trees, ad groups, campaigns, accounts.

An account is three priority tiers of shopping campaigns that carve up query
traffic purely with negative keyword lists:

* one High-priority campaign that catches generic traffic,
* one Medium-priority campaign with an ad group per reseller brand,
* Low-priority campaigns, one per keyword group, whose ad groups each own a
  single bidding keyword.

Everything here is immutable; updates build new values.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Union

from .erasers import Eraser
from .errors import InputError
from .keywords import Keyword, NegativeKeyword


@dataclass(frozen=True, order=True)
class Money:
    """An amount in micro currency units (1_000_000 micros = 1 unit)."""

    micros: int

    def __post_init__(self) -> None:
        if self.micros < 0:
            raise InputError(f"negative money amount: {self.micros}")


@dataclass(frozen=True)
class Rule:
    """keyword -> bid, advertising a non-empty set of shop items."""

    keyword: Keyword
    cpc: Money
    items: frozenset[str]

    def __post_init__(self) -> None:
        if not self.items:
            raise InputError(f"rule for {self.keyword.text!r} has no items")
        if any(not item for item in self.items):
            raise InputError(f"rule for {self.keyword.text!r} has an empty item id")


@dataclass(frozen=True)
class Leaf:
    """Terminal node of a product tree, bidding every product that reaches it."""

    bid: Money


@dataclass(frozen=True)
class Split:
    """Partition of products by one attribute's values, plus an 'others' branch."""

    attribute: str
    branches: tuple[tuple[str, "ProductTree"], ...]
    others: "ProductTree"

    def __post_init__(self) -> None:
        values = [v for v, _ in self.branches]
        if len(values) != len(set(values)):
            raise InputError(f"duplicate branch values on attribute {self.attribute!r}")


ProductTree = Union[Leaf, Split]


def tree_leaves(tree: ProductTree) -> Iterator[Leaf]:
    """Yield every leaf of a product tree."""
    if isinstance(tree, Leaf):
        yield tree
        return
    for _, sub in tree.branches:
        yield from tree_leaves(sub)
    yield from tree_leaves(tree.others)


class Priority(IntEnum):
    LOW = 0
    MEDIUM = 1
    HIGH = 2


# --- tags identify the intended role of campaigns and ad groups -----------

@dataclass(frozen=True)
class CatchAllTag:
    """Ad group meant to receive all unrecognized traffic."""


@dataclass(frozen=True)
class BrandTag:
    """Ad group dedicated to one reseller brand."""

    brand: Keyword


@dataclass(frozen=True)
class RuleTag:
    """Ad group dedicated to one bidding keyword."""

    keyword: Keyword


AdGroupTag = Union[CatchAllTag, BrandTag, RuleTag]


@dataclass(frozen=True)
class GeneralCampaignTag:
    """The single High-priority campaign."""


@dataclass(frozen=True)
class BrandCampaignTag:
    """The single Medium-priority campaign."""


@dataclass(frozen=True)
class GroupCampaignTag:
    """A Low-priority campaign owning keyword group ``index`` (1-based)."""

    index: int


CampaignTag = Union[GeneralCampaignTag, BrandCampaignTag, GroupCampaignTag]


@dataclass(frozen=True)
class AdGroup:
    name: str
    tag: AdGroupTag
    negatives: frozenset[NegativeKeyword]
    tree: ProductTree


@dataclass(frozen=True)
class Campaign:
    name: str
    priority: Priority
    tag: CampaignTag
    negatives: frozenset[NegativeKeyword]
    adgroups: tuple[AdGroup, ...]

    def __post_init__(self) -> None:
        if not self.adgroups:
            raise InputError(f"campaign {self.name!r} has no ad groups")
        names = [g.name for g in self.adgroups]
        if len(names) != len(set(names)):
            raise InputError(f"campaign {self.name!r} repeats an ad group name")


@dataclass(frozen=True)
class Account:
    """A full account: campaigns plus the bookkeeping that updates rely on.

    ``partition`` holds the keyword groups backing the Low-priority campaigns,
    aligned with ``erasers`` (the per-group eraser lists whose images cover the
    group exactly).  ``limit`` is the per-campaign negative keyword cap.
    """

    limit: int
    brands: tuple[Keyword, ...]
    non_brands: tuple[Keyword, ...]
    campaigns: tuple[Campaign, ...]
    partition: tuple[frozenset[Keyword], ...]
    erasers: tuple[tuple[Eraser, ...], ...]

    def __post_init__(self) -> None:
        names = [c.name for c in self.campaigns]
        if len(names) != len(set(names)):
            raise InputError("account repeats a campaign name")
        if len(self.partition) != len(self.erasers):
            raise InputError("partition and eraser lists are misaligned")
        generals = [c for c in self.campaigns if isinstance(c.tag, GeneralCampaignTag)]
        if len(generals) != 1:
            raise InputError("account needs exactly one High-tier campaign")
        brand_tier = [c for c in self.campaigns if isinstance(c.tag, BrandCampaignTag)]
        if len(brand_tier) > 1:
            raise InputError("account allows at most one Medium-tier campaign")

    # --- convenience accessors -------------------------------------------

    def keywords(self) -> frozenset[Keyword]:
        """All bidding keywords (the union of the partition)."""
        out: set[Keyword] = set()
        for group in self.partition:
            out.update(group)
        return frozenset(out)

    def general_campaign(self) -> Campaign:
        return next(c for c in self.campaigns if isinstance(c.tag, GeneralCampaignTag))

    def brand_campaign(self) -> Campaign | None:
        for c in self.campaigns:
            if isinstance(c.tag, BrandCampaignTag):
                return c
        return None

    def group_campaigns(self) -> tuple[Campaign, ...]:
        return tuple(
            c for c in self.campaigns if isinstance(c.tag, GroupCampaignTag)
        )

    def campaign_for_group(self, index: int) -> Campaign:
        for c in self.campaigns:
            if isinstance(c.tag, GroupCampaignTag) and c.tag.index == index:
                return c
        raise InputError(f"no campaign for group {index}")

    def group_indices(self) -> tuple[int, ...]:
        return tuple(
            c.tag.index for c in self.campaigns if isinstance(c.tag, GroupCampaignTag)
        )

    def group_of(self, keyword: Keyword) -> int:
        """Position (0-based) in ``partition`` of the group holding ``keyword``."""
        for pos, group in enumerate(self.partition):
            if keyword in group:
                return pos
        from .errors import UnknownKeywordError

        raise UnknownKeywordError(f"keyword not in account: {keyword.text!r}")


def negative_count(account: Account) -> int:
    """Literal number of negatives stored account-wide (campaign + ad group)."""
    total = 0
    for c in account.campaigns:
        total += len(c.negatives)
        for g in c.adgroups:
            total += len(g.negatives)
    return total
