from __future__ import annotations

from collections import Counter

import pytest

from shopstruct import (
    BuildConfig,
    Change,
    DuplicateKeywordError,
    ExactEraser,
    InputError,
    LimitExceededError,
    Money,
    Rule,
    UnknownKeywordError,
    add_rule,
    apply_changes,
    build_account,
    check_balance,
    describe,
    exact,
    large,
    negative_count,
    normalize,
    phrase,
    remove_item,
    remove_rule,
    render_account,
    simulate,
    verify_account,
)


def _ops(outcome) -> Counter:
    return Counter(c.op for c in outcome.changes)


def _assert_replay(before, outcome):
    assert apply_changes(before, outcome.changes) == outcome.account


def test_add_rule_into_admitting_group(golden_account):
    rule = Rule(normalize("nike jogging"), Money(77_000), frozenset({"item-20"}))
    out = add_rule(golden_account, rule)
    _assert_replay(golden_account, out)

    assert len(out.changes) == 11
    assert _ops(out) == Counter(
        {
            "add_campaign_negative": 4,
            "add_adgroup_negative": 4,
            "add_adgroup": 1,
            "assign_keyword": 1,
            "add_eraser": 1,
        }
    )

    acc = out.account
    # exact negative lands on the general, brand, and both other group campaigns
    for name in ("c1", "c2", "c3_2", "c3_3"):
        camp = next(c for c in acc.campaigns if c.name == name)
        assert exact(rule.keyword) in camp.negatives

    # the keyword joined group 1 with a fresh ad group and sibling blocking
    assert acc.group_of(rule.keyword) == 0
    own = acc.campaign_for_group(1)
    assert exact(rule.keyword) not in own.negatives
    new_adgroup = next(g for g in own.adgroups if g.name == "nike jogging")
    assert len(new_adgroup.negatives) == 4
    for sibling in own.adgroups:
        if sibling.name != "nike jogging":
            assert exact(rule.keyword) in sibling.negatives
    assert ExactEraser(rule.keyword) in acc.erasers[0]
    assert new_adgroup.tree.bid == rule.cpc

    result = simulate(acc, rule.keyword)
    assert result.disposition.kind == "landed"
    assert result.disposition.adgroup == "nike jogging"


def test_add_rule_opens_new_campaign_when_blocked_everywhere(golden_account):
    rule = Rule(normalize("nike large shoes"), Money(90_000), frozenset({"item-21"}))
    out = add_rule(golden_account, rule)
    _assert_replay(golden_account, out)

    assert len(out.changes) == 4
    assert _ops(out) == Counter(
        {
            "add_campaign_negative": 2,
            "add_campaign": 1,
            "add_group": 1,
        }
    )

    acc = out.account
    fresh = acc.campaign_for_group(4)
    assert fresh.name == "c3_4"
    assert fresh.negatives == frozenset(
        {
            large(normalize("adidas")),
            large(normalize("air")),
            large(normalize("soccer")),
            exact(normalize("garmin chronometer")),
            exact(normalize("large superstar shoes")),
            exact(normalize("large tee-shirt")),
            exact(normalize("nike shoes")),
            phrase(normalize("reebok")),
        }
    )
    assert acc.partition[3] == frozenset({rule.keyword})
    assert acc.erasers[3] == (ExactEraser(rule.keyword),)

    # every catalogue keyword still routes to its own ad group
    for kw in sorted(acc.keywords()):
        result = simulate(acc, kw)
        assert result.disposition.kind == "landed"
        assert result.disposition.adgroup == kw.text

    assert verify_account(acc).passed


def test_add_rule_min_negatives_places_into_cheapest_group(golden_account):
    rule = Rule(normalize("nike large shoes"), Money(90_000), frozenset({"item-21"}))
    out = add_rule(golden_account, rule, strategy="min-negatives")
    _assert_replay(golden_account, out)

    acc = out.account
    assert len(acc.partition) == 3
    assert acc.group_of(rule.keyword) == 0
    # group 3 can no longer share a single 'large' eraser once the new keyword
    # must stay admitted by group 1, so its cover falls back to exacts
    assert acc.erasers[2] == (
        ExactEraser(normalize("air max")),
        ExactEraser(normalize("garmin chronometer")),
        ExactEraser(normalize("large superstar shoes")),
        ExactEraser(normalize("large tee-shirt")),
    )
    assert verify_account(acc).passed

    new_campaign_total = negative_count(
        add_rule(golden_account, rule).account
    )
    assert negative_count(acc) == 90
    assert new_campaign_total == 88


def test_add_rule_rejects_duplicates_and_unknown_strategy(golden_account):
    dup = Rule(normalize("nike shoes"), Money(1_000), frozenset({"x"}))
    with pytest.raises(DuplicateKeywordError):
        add_rule(golden_account, dup)
    rule = Rule(normalize("brand new"), Money(1_000), frozenset({"x"}))
    with pytest.raises(InputError):
        add_rule(golden_account, rule, strategy="fastest")


def test_add_rule_prefers_smallest_admitting_group():
    rules = [
        Rule(normalize(t), Money(10_000 + i), frozenset({f"it-{i}"}))
        for i, t in enumerate(["a b", "c d", "e f", "g h"])
    ]
    account = build_account(
        rules, config=BuildConfig(mode="naive", target_size=3)
    )
    assert [len(g) for g in account.partition] == [3, 1]
    out = add_rule(
        account, Rule(normalize("zz yy"), Money(5_000), frozenset({"it-9"}))
    )
    assert out.account.group_of(normalize("zz yy")) == 1
    _assert_replay(account, out)


def test_add_rule_respects_the_limit(golden_rules, golden_brands, golden_non_brands):
    account = build_account(
        golden_rules, golden_brands, golden_non_brands, config=BuildConfig(limit=15)
    )
    with pytest.raises(LimitExceededError):
        add_rule(
            account, Rule(normalize("one more"), Money(1_000), frozenset({"i"}))
        )


def test_remove_rule_walkthrough(golden_account):
    out = remove_rule(golden_account, normalize("air max"))
    _assert_replay(golden_account, out)

    assert len(out.changes) == 10
    assert _ops(out) == Counter(
        {
            "remove_campaign_negative": 4,
            "remove_adgroup_negative": 3,
            "remove_adgroup": 1,
            "unassign_keyword": 1,
            "remove_eraser": 1,
        }
    )

    acc = out.account
    gone = exact(normalize("air max"))
    for campaign in acc.campaigns:
        assert gone not in campaign.negatives
        for adgroup in campaign.adgroups:
            assert gone not in adgroup.negatives
            assert adgroup.name != "air max"
    assert normalize("air max") not in acc.keywords()
    assert ExactEraser(normalize("air max")) not in acc.erasers[2]
    # the shared 'large' eraser still serves the two remaining large keywords
    assert large(normalize("large")) in acc.campaign_for_group(1).negatives
    assert verify_account(acc).passed


def test_remove_rule_drops_large_eraser_with_empty_image(golden_account):
    # removing both 'large ...' keywords leaves the shared eraser useless
    step1 = remove_rule(golden_account, normalize("large tee-shirt"))
    _assert_replay(golden_account, step1)
    step2 = remove_rule(step1.account, normalize("large superstar shoes"))
    _assert_replay(step1.account, step2)
    acc = step2.account
    for group in acc.erasers:
        assert large(normalize("large")) not in {e.to_negative() for e in group}
    for campaign in acc.campaigns:
        assert large(normalize("large")) not in campaign.negatives
    assert verify_account(acc).passed


def test_remove_last_keyword_removes_campaign(golden_account):
    rule = Rule(normalize("nike large shoes"), Money(90_000), frozenset({"item-21"}))
    grown = add_rule(golden_account, rule).account
    out = remove_rule(grown, rule.keyword)
    _assert_replay(grown, out)
    assert _ops(out)["remove_campaign"] == 1
    assert _ops(out)["remove_group"] == 1
    assert render_account(out.account) == render_account(golden_account)


def test_remove_rule_unknown_keyword(golden_account):
    with pytest.raises(UnknownKeywordError):
        remove_rule(golden_account, normalize("never added"))


def test_remove_item_shrinks_and_removes(golden_rules, golden_account):
    # item-9 belongs only to 'garmin chronometer' (rule 9)
    target = golden_rules[8]
    assert target.items == frozenset({"item-9"})
    out = remove_item(golden_account, golden_rules, "item-9")
    _assert_replay(golden_account, out)
    assert out.rules is not None
    assert all(r.keyword != target.keyword for r in out.rules)
    assert target.keyword not in out.account.keywords()
    assert verify_account(out.account).passed


def test_remove_item_shrinking_rule_keeps_account(golden_rules, golden_account):
    shared = Rule(
        normalize("extra rule"),
        Money(1_000),
        frozenset({"item-1", "item-99"}),
    )
    rules = list(golden_rules) + [shared]
    grown = add_rule(
        golden_account, shared
    ).account
    out = remove_item(grown, rules, "item-99")
    assert out.changes == ()
    assert out.account == grown
    kept = next(r for r in out.rules if r.keyword == shared.keyword)
    assert kept.items == frozenset({"item-1"})


def test_remove_item_unknown_is_noop(golden_rules, golden_account):
    out = remove_item(golden_account, golden_rules, "item-404")
    assert out.changes == ()
    assert out.account == golden_account
    assert tuple(out.rules) == tuple(golden_rules)


def test_check_balance_flags_drifted_shapes():
    rules = [
        Rule(normalize(f"kw{i} x{i}"), Money(1_000), frozenset({"i"}))
        for i in range(9)
    ]
    shattered = build_account(
        rules, config=BuildConfig(mode="naive", target_size=1)
    )
    report = check_balance(shattered)
    assert report.recommended
    assert any("groups" in r for r in report.reasons)

    lumped = build_account(
        rules, config=BuildConfig(mode="naive", target_size=9)
    )
    report = check_balance(lumped)
    assert report.recommended
    assert any("largest group" in r for r in report.reasons)

    balanced = build_account(rules, config=BuildConfig(mode="naive"))
    assert not check_balance(balanced).recommended


def test_update_outcomes_carry_balance(golden_account):
    rule = Rule(normalize("nike jogging"), Money(77_000), frozenset({"item-20"}))
    out = add_rule(golden_account, rule)
    assert out.balance.keyword_count == 12
    assert not out.balance.recommended


def test_describe_covers_every_op(golden_account):
    rule = Rule(normalize("nike large shoes"), Money(90_000), frozenset({"item-21"}))
    seen: list[Change] = []
    seen += add_rule(golden_account, rule).changes
    seen += add_rule(golden_account, rule, strategy="min-negatives").changes
    seen += add_rule(
        golden_account,
        Rule(normalize("nike jogging"), Money(1_000), frozenset({"i"})),
    ).changes
    seen += remove_rule(golden_account, normalize("air max")).changes
    grown = add_rule(golden_account, rule).account
    seen += remove_rule(grown, rule.keyword).changes
    for change in seen:
        line = describe(change)
        assert isinstance(line, str) and line


def test_apply_changes_rejects_missing_targets(golden_account):
    with pytest.raises(InputError):
        apply_changes(
            golden_account,
            [Change(op="remove_campaign", campaign="c9")],
        )
