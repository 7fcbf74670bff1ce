"""shopstruct: compile keyword rule catalogues into shopping account
structures whose campaigns route every query tier by tier with as few
negative keywords as the catalogue's keyword reuse allows."""

from __future__ import annotations

from .account import (
    Account,
    AdGroup,
    BrandCampaignTag,
    BrandTag,
    Campaign,
    CatchAllTag,
    GeneralCampaignTag,
    GroupCampaignTag,
    Leaf,
    Money,
    Priority,
    ProductTree,
    Rule,
    RuleTag,
    Split,
    negative_count,
    tree_leaves,
)
from .bounds import (
    ReferenceRow,
    ReferenceSite,
    REFERENCE_SITES,
    high_medium_count,
    nk_exact,
    nk_worst_case_optimal,
    nk_worst_case_optimal_rounded,
    reference_table,
)
from .builder import (
    BuildConfig,
    ReductionStats,
    build_account,
    naive_partition,
    plan_groups,
    reduction_stats,
)
from .erasers import (
    Candidate,
    Eraser,
    EraserGraph,
    ExactEraser,
    GroupPlan,
    LargeEraser,
    build_graph,
    enumerate_candidates,
    eraser_image,
    erases,
    exact_packing_oracle,
    expand,
    make_group_plan,
    reduce_keywords,
    select_color_class,
    welsh_powell,
)
from .errors import (
    CandidateLimitError,
    DuplicateKeywordError,
    EmptyKeywordError,
    InfeasibleTargetError,
    InputError,
    LimitExceededError,
    ShopstructError,
    UnknownKeywordError,
)
from .keywords import (
    Keyword,
    MatchType,
    NegativeKeyword,
    distinct_keywords,
    exact,
    exact_matches,
    large,
    large_matches,
    matches,
    normalize,
    phrase,
    phrase_matches,
    subword_set,
    word_set,
)
from .simulate import (
    Ambiguous,
    Blocked,
    DeadEnd,
    Entered,
    FellThrough,
    Landed,
    NegativeIndex,
    Simulator,
    TraceReport,
    Trajectory,
    simulate,
    trace_report,
)
from .rules_io import (
    dumps_rules,
    load_keywords,
    load_rules,
    loads_keywords,
    loads_rules,
    parse_rule_line,
    save_keywords,
    save_rules,
)
from .snapshot import account_document, parse_account, parse_account_document, render_account
from .synth import SyntheticCatalogue, SyntheticSpec, generate
from .updates import (
    BalanceReport,
    Change,
    UpdateOutcome,
    add_rule,
    apply_change,
    apply_changes,
    check_balance,
    describe,
    remove_item,
    remove_rule,
)
from .verify import (
    Failure,
    Finding,
    PropertyResult,
    VerificationReport,
    verify_account,
    verify_property1,
    verify_property2,
    verify_property3,
    verify_structure,
)

__version__ = "0.1.0"

__all__ = [
    "Account",
    "AdGroup",
    "Ambiguous",
    "BalanceReport",
    "Blocked",
    "BrandCampaignTag",
    "BrandTag",
    "BuildConfig",
    "Campaign",
    "Candidate",
    "CandidateLimitError",
    "CatchAllTag",
    "Change",
    "DeadEnd",
    "DuplicateKeywordError",
    "EmptyKeywordError",
    "Entered",
    "Eraser",
    "EraserGraph",
    "ExactEraser",
    "Failure",
    "FellThrough",
    "Finding",
    "GeneralCampaignTag",
    "GroupCampaignTag",
    "GroupPlan",
    "InfeasibleTargetError",
    "InputError",
    "Keyword",
    "Landed",
    "LargeEraser",
    "Leaf",
    "LimitExceededError",
    "MatchType",
    "Money",
    "NegativeIndex",
    "NegativeKeyword",
    "Priority",
    "ProductTree",
    "PropertyResult",
    "REFERENCE_SITES",
    "ReductionStats",
    "ReferenceRow",
    "ReferenceSite",
    "Rule",
    "RuleTag",
    "ShopstructError",
    "Simulator",
    "Split",
    "SyntheticCatalogue",
    "SyntheticSpec",
    "TraceReport",
    "Trajectory",
    "UnknownKeywordError",
    "UpdateOutcome",
    "VerificationReport",
    "add_rule",
    "apply_change",
    "apply_changes",
    "build_account",
    "build_graph",
    "check_balance",
    "describe",
    "distinct_keywords",
    "enumerate_candidates",
    "eraser_image",
    "erases",
    "exact",
    "exact_matches",
    "exact_packing_oracle",
    "expand",
    "generate",
    "high_medium_count",
    "large",
    "large_matches",
    "make_group_plan",
    "matches",
    "naive_partition",
    "negative_count",
    "nk_exact",
    "nk_worst_case_optimal",
    "nk_worst_case_optimal_rounded",
    "normalize",
    "account_document",
    "dumps_rules",
    "load_keywords",
    "load_rules",
    "loads_keywords",
    "loads_rules",
    "parse_account",
    "parse_account_document",
    "parse_rule_line",
    "save_keywords",
    "save_rules",
    "phrase",
    "phrase_matches",
    "plan_groups",
    "reduce_keywords",
    "reduction_stats",
    "reference_table",
    "remove_item",
    "remove_rule",
    "render_account",
    "select_color_class",
    "simulate",
    "subword_set",
    "trace_report",
    "tree_leaves",
    "verify_account",
    "verify_property1",
    "verify_property2",
    "verify_property3",
    "verify_structure",
    "welsh_powell",
    "word_set",
]
