"""Lossless JSON snapshots of accounts.

The renderer is deterministic: negatives are sorted by (match type, keyword),
keywords inside partition groups are sorted, and everything else keeps the
account's own canonical order, so rendering the parse of a rendering is
byte-identical.
"""

from __future__ import annotations

import json
from typing import Any

from .account import (
    Account,
    AdGroup,
    AdGroupTag,
    BrandCampaignTag,
    BrandTag,
    Campaign,
    CampaignTag,
    CatchAllTag,
    GeneralCampaignTag,
    GroupCampaignTag,
    Leaf,
    Money,
    Priority,
    ProductTree,
    RuleTag,
    Split,
)
from .erasers import Eraser, ExactEraser, LargeEraser
from .errors import InputError
from .keywords import Keyword, MatchType, NegativeKeyword, normalize

_PRIORITY_NAMES = {Priority.HIGH: "high", Priority.MEDIUM: "medium", Priority.LOW: "low"}
_PRIORITY_VALUES = {v: k for k, v in _PRIORITY_NAMES.items()}


def _negatives_doc(negatives: frozenset[NegativeKeyword]) -> list[dict[str, str]]:
    ordered = sorted(negatives, key=NegativeKeyword.sort_key)
    return [{"keyword": n.keyword.text, "match": n.match.value} for n in ordered]


def _tree_doc(tree: ProductTree) -> dict[str, Any]:
    if isinstance(tree, Leaf):
        return {"kind": "leaf", "bid_micros": tree.bid.micros}
    return {
        "kind": "split",
        "attribute": tree.attribute,
        "branches": [
            {"value": value, "tree": _tree_doc(sub)} for value, sub in tree.branches
        ],
        "others": _tree_doc(tree.others),
    }


def _campaign_tag_doc(tag: CampaignTag) -> dict[str, Any]:
    if isinstance(tag, GeneralCampaignTag):
        return {"kind": "general"}
    if isinstance(tag, BrandCampaignTag):
        return {"kind": "brands"}
    return {"kind": "group", "index": tag.index}


def _adgroup_tag_doc(tag: AdGroupTag) -> dict[str, Any]:
    if isinstance(tag, CatchAllTag):
        return {"kind": "catch_all"}
    if isinstance(tag, BrandTag):
        return {"kind": "brand", "brand": tag.brand.text}
    return {"kind": "rule", "keyword": tag.keyword.text}


def _eraser_doc(eraser: Eraser) -> dict[str, Any]:
    if isinstance(eraser, LargeEraser):
        return {"kind": "large", "words": sorted(eraser.words)}
    return {"kind": "exact", "keyword": eraser.keyword.text}


def account_document(account: Account) -> dict[str, Any]:
    return {
        "limit": account.limit,
        "brands": [b.text for b in account.brands],
        "non_brands": [b.text for b in account.non_brands],
        "campaigns": [
            {
                "name": c.name,
                "priority": _PRIORITY_NAMES[c.priority],
                "tag": _campaign_tag_doc(c.tag),
                "negatives": _negatives_doc(c.negatives),
                "adgroups": [
                    {
                        "name": g.name,
                        "tag": _adgroup_tag_doc(g.tag),
                        "negatives": _negatives_doc(g.negatives),
                        "tree": _tree_doc(g.tree),
                    }
                    for g in c.adgroups
                ],
            }
            for c in account.campaigns
        ],
        "partition": [sorted(kw.text for kw in group) for group in account.partition],
        "erasers": [
            [_eraser_doc(e) for e in group] for group in account.erasers
        ],
    }


def render_account(account: Account) -> str:
    return json.dumps(account_document(account), indent=2) + "\n"


def _parse_negatives(doc: Any) -> frozenset[NegativeKeyword]:
    if not isinstance(doc, list):
        raise InputError("negatives must be a list")
    out = []
    for item in doc:
        try:
            kw = normalize(item["keyword"])
            match = MatchType(item["match"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad negative entry: {item!r}") from exc
        out.append(NegativeKeyword(kw, match))
    return frozenset(out)


def _parse_tree(doc: Any) -> ProductTree:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError(f"bad product tree: {doc!r}")
    if doc["kind"] == "leaf":
        return Leaf(Money(int(doc["bid_micros"])))
    if doc["kind"] == "split":
        return Split(
            attribute=str(doc["attribute"]),
            branches=tuple(
                (str(b["value"]), _parse_tree(b["tree"])) for b in doc["branches"]
            ),
            others=_parse_tree(doc["others"]),
        )
    raise InputError(f"unknown tree kind: {doc['kind']!r}")


def _parse_campaign_tag(doc: Any) -> CampaignTag:
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "general":
        return GeneralCampaignTag()
    if kind == "brands":
        return BrandCampaignTag()
    if kind == "group":
        return GroupCampaignTag(int(doc["index"]))
    raise InputError(f"unknown campaign tag: {doc!r}")


def _parse_adgroup_tag(doc: Any) -> AdGroupTag:
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "catch_all":
        return CatchAllTag()
    if kind == "brand":
        return BrandTag(normalize(doc["brand"]))
    if kind == "rule":
        return RuleTag(normalize(doc["keyword"]))
    raise InputError(f"unknown ad group tag: {doc!r}")


def _parse_eraser(doc: Any) -> Eraser:
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "large":
        return LargeEraser(frozenset(str(w) for w in doc["words"]))
    if kind == "exact":
        return ExactEraser(normalize(doc["keyword"]))
    raise InputError(f"unknown eraser kind: {doc!r}")


def parse_account_document(doc: Any) -> Account:
    if not isinstance(doc, dict):
        raise InputError("account snapshot must be a JSON object")
    try:
        campaigns = []
        for cdoc in doc["campaigns"]:
            adgroups = tuple(
                AdGroup(
                    name=str(g["name"]),
                    tag=_parse_adgroup_tag(g["tag"]),
                    negatives=_parse_negatives(g["negatives"]),
                    tree=_parse_tree(g["tree"]),
                )
                for g in cdoc["adgroups"]
            )
            campaigns.append(
                Campaign(
                    name=str(cdoc["name"]),
                    priority=_PRIORITY_VALUES[cdoc["priority"]],
                    tag=_parse_campaign_tag(cdoc["tag"]),
                    negatives=_parse_negatives(cdoc["negatives"]),
                    adgroups=adgroups,
                )
            )
        return Account(
            limit=int(doc["limit"]),
            brands=tuple(normalize(b) for b in doc["brands"]),
            non_brands=tuple(normalize(b) for b in doc["non_brands"]),
            campaigns=tuple(campaigns),
            partition=tuple(
                frozenset(normalize(kw) for kw in group) for group in doc["partition"]
            ),
            erasers=tuple(
                tuple(_parse_eraser(e) for e in group) for group in doc["erasers"]
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed account snapshot: {exc}") from exc


def parse_account(text: str) -> Account:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"account snapshot is not valid JSON: {exc}") from exc
    return parse_account_document(doc)
