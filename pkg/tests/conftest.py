from __future__ import annotations

import pytest

from shopstruct import (
    BuildConfig,
    Money,
    Rule,
    build_account,
    generate,
    normalize,
    SyntheticSpec,
)

GOLDEN_KEYWORDS = (
    "nike shoes",
    "nike soccer white",
    "nike air max",
    "adidas running shoes",
    "adidas superstar",
    "soccer colored mens",
    "adidas superstar sneaker",
    "air max",
    "garmin chronometer",
    "large superstar shoes",
    "large tee-shirt",
)

GOLDEN_BRANDS = ("nike", "adidas", "garmin")
GOLDEN_NON_BRANDS = ("reebok",)


def make_golden_rules() -> tuple[Rule, ...]:
    return tuple(
        Rule(
            keyword=normalize(text),
            cpc=Money(100_000 + 10_000 * i),
            items=frozenset({f"item-{i + 1}"}),
        )
        for i, text in enumerate(GOLDEN_KEYWORDS)
    )


@pytest.fixture(scope="session")
def golden_rules():
    return make_golden_rules()


@pytest.fixture(scope="session")
def golden_brands():
    return tuple(normalize(b) for b in GOLDEN_BRANDS)


@pytest.fixture(scope="session")
def golden_non_brands():
    return tuple(normalize(b) for b in GOLDEN_NON_BRANDS)


@pytest.fixture(scope="session")
def golden_account(golden_rules, golden_brands, golden_non_brands):
    return build_account(golden_rules, golden_brands, golden_non_brands)


@pytest.fixture(scope="session")
def golden_naive_account(golden_rules, golden_brands, golden_non_brands):
    return build_account(
        golden_rules,
        golden_brands,
        golden_non_brands,
        config=BuildConfig(mode="naive"),
    )


FOUR_KEYWORDS = ("nike shoes", "large tee-shirt", "garmin chronometer", "adidas shoes")


@pytest.fixture(scope="session")
def four_rules():
    items = (("item-1",), ("item-2", "item-3"), ("item-4",), ("item-5",))
    return tuple(
        Rule(
            keyword=normalize(text),
            cpc=Money(200_000 + 25_000 * i),
            items=frozenset(its),
        )
        for i, (text, its) in enumerate(zip(FOUR_KEYWORDS, items))
    )


MATRIX_SIZES = (10, 100, 1000)
MATRIX_SEEDS = (1, 2, 3)


@pytest.fixture(scope="session")
def matrix_catalogues():
    """Synthetic catalogues shared by the property and acceptance suites."""
    out = {}
    for n in MATRIX_SIZES:
        for seed in MATRIX_SEEDS:
            out[(n, seed)] = generate(SyntheticSpec(n=n, seed=seed))
    return out


@pytest.fixture(scope="session")
def matrix_accounts(matrix_catalogues):
    """Both build modes for every matrix catalogue."""
    out = {}
    for (n, seed), cat in matrix_catalogues.items():
        for mode in ("naive", "reduced"):
            out[(n, seed, mode)] = build_account(
                cat.rules,
                cat.brands,
                cat.non_brands,
                config=BuildConfig(mode=mode),
            )
    return out
