"""Deterministic single-query simulation of an account's filter structure.

Tiers are tried High, then Medium, then Low.  A campaign admits a query when
none of its campaign negatives match.  Within a tier, exactly one admitting
campaign means the query enters it and lower tiers are never consulted; more
than one is reported as ambiguous (the platform would pick arbitrarily, which
the structure is supposed to rule out).  Inside a campaign, the open ad groups
are those whose negatives all miss; exactly one open ad group is a clean
landing, none is a dead end (the query is absorbed, not passed on), several is
again ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .account import Account, AdGroup, Campaign, Priority
from .keywords import (
    Keyword,
    MatchType,
    NegativeKeyword,
    large_matches,
    phrase_matches,
)


@dataclass(frozen=True)
class Blocked:
    """The campaign refused the query; ``by`` is the first matching negative."""

    by: NegativeKeyword


@dataclass(frozen=True)
class Entered:
    """The campaign admitted the query; ``open_adgroups`` passed their negatives."""

    open_adgroups: tuple[str, ...]


StepOutcome = Union[Blocked, Entered]


@dataclass(frozen=True)
class Step:
    campaign: str
    outcome: StepOutcome


@dataclass(frozen=True)
class Landed:
    campaign: str
    adgroup: str

    kind = "landed"


@dataclass(frozen=True)
class DeadEnd:
    campaign: str

    kind = "dead_end"


@dataclass(frozen=True)
class Ambiguous:
    campaigns: tuple[str, ...]
    adgroups: tuple[str, ...]

    kind = "ambiguous"


@dataclass(frozen=True)
class FellThrough:
    kind = "fell_through"


Disposition = Union[Landed, DeadEnd, Ambiguous, FellThrough]


@dataclass(frozen=True)
class Trajectory:
    query: Keyword
    steps: tuple[Step, ...]
    disposition: Disposition


class NegativeIndex:
    """Negatives of one campaign or ad group, split by match type for speed."""

    __slots__ = ("exact", "phrases", "larges")

    def __init__(self, negatives: frozenset[NegativeKeyword]) -> None:
        self.exact: dict[tuple[str, ...], NegativeKeyword] = {}
        phrases = []
        larges = []
        for neg in negatives:
            if neg.match is MatchType.EXACT:
                self.exact[neg.keyword.words] = neg
            elif neg.match is MatchType.PHRASE:
                phrases.append(neg)
            else:
                larges.append(neg)
        # Sorted so the reported blocker is the canonically first match.
        self.phrases = sorted(phrases, key=NegativeKeyword.sort_key)
        self.larges = sorted(larges, key=NegativeKeyword.sort_key)

    def first_match(self, query: Keyword) -> NegativeKeyword | None:
        hit = self.exact.get(query.words)
        if hit is not None:
            return hit
        for neg in self.phrases:
            if phrase_matches(query, neg.keyword):
                return neg
        for neg in self.larges:
            if large_matches(query, neg.keyword):
                return neg
        return None


class Simulator:
    """Reusable query router for one account; build once, run many queries."""

    def __init__(self, account: Account) -> None:
        self.account = account
        self._campaign_index: dict[str, NegativeIndex] = {}
        self._adgroup_index: dict[tuple[str, str], NegativeIndex] = {}
        self._tiers: list[list[Campaign]] = []
        for priority in (Priority.HIGH, Priority.MEDIUM, Priority.LOW):
            tier = [c for c in account.campaigns if c.priority is priority]
            if tier:
                self._tiers.append(tier)
        for c in account.campaigns:
            self._campaign_index[c.name] = NegativeIndex(c.negatives)
            for g in c.adgroups:
                self._adgroup_index[(c.name, g.name)] = NegativeIndex(g.negatives)

    def open_adgroups(self, campaign: Campaign, query: Keyword) -> list[AdGroup]:
        out = []
        for g in campaign.adgroups:
            idx = self._adgroup_index[(campaign.name, g.name)]
            if idx.first_match(query) is None:
                out.append(g)
        return out

    def run(self, query: Keyword) -> Trajectory:
        steps: list[Step] = []
        for tier in self._tiers:
            admitted: list[Campaign] = []
            blocked: list[Step] = []
            for c in tier:
                hit = self._campaign_index[c.name].first_match(query)
                if hit is None:
                    admitted.append(c)
                else:
                    blocked.append(Step(c.name, Blocked(hit)))
            if not admitted:
                steps.extend(blocked)
                continue
            if len(admitted) > 1:
                for c in admitted:
                    names = tuple(g.name for g in self.open_adgroups(c, query))
                    steps.append(Step(c.name, Entered(names)))
                steps.extend(blocked)
                return Trajectory(
                    query,
                    tuple(steps),
                    Ambiguous(tuple(c.name for c in admitted), ()),
                )
            campaign = admitted[0]
            open_groups = self.open_adgroups(campaign, query)
            steps.extend(blocked)
            steps.append(
                Step(campaign.name, Entered(tuple(g.name for g in open_groups)))
            )
            if len(open_groups) == 1:
                return Trajectory(
                    query, tuple(steps), Landed(campaign.name, open_groups[0].name)
                )
            if not open_groups:
                return Trajectory(query, tuple(steps), DeadEnd(campaign.name))
            return Trajectory(
                query,
                tuple(steps),
                Ambiguous((campaign.name,), tuple(g.name for g in open_groups)),
            )
        return Trajectory(query, tuple(steps), FellThrough())


def simulate(account: Account, query: Keyword) -> Trajectory:
    """One-off convenience wrapper; builds a throwaway Simulator."""
    return Simulator(account).run(query)


@dataclass(frozen=True)
class TraceReport:
    trajectories: tuple[Trajectory, ...]
    counts: tuple[tuple[str, int], ...]

    def count(self, kind: str) -> int:
        return dict(self.counts).get(kind, 0)


def trace_report(account: Account, queries: list[Keyword]) -> TraceReport:
    """Simulate many queries and tally dispositions by kind."""
    sim = Simulator(account)
    trajectories = tuple(sim.run(q) for q in queries)
    tally: dict[str, int] = {}
    for t in trajectories:
        tally[t.disposition.kind] = tally.get(t.disposition.kind, 0) + 1
    return TraceReport(trajectories, tuple(sorted(tally.items())))
