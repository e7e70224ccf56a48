"""p-additive cooperative games, inventory games with temporary discounts,
and the modified SOC-rule."""

from .game_core import (
    Coalition,
    GameError,
    Orientation,
    TuGame,
    allocation_sum,
    coalition,
    game_from_table,
    labels,
    make_game,
    p_sum,
    subgame,
    unanimity_game,
    zero_game,
)
from .inventory import (
    Firm,
    InventoryError,
    InventorySituation,
    OrderPolicy,
    build_id_game,
    build_inventory_cost_game,
    coalition_policy,
    coalition_saving,
    coalition_special_order,
    cost_with_special,
    cost_without_special,
    epq_optimal,
    indices,
    lambda_of,
    orders_rate,
    saving_single,
    special_order,
)
from .padditive import (
    ClassProfile,
    PAdditiveGame,
    classify,
    decompose_unanimity,
    from_individual_values,
    padditive_sum,
    support,
    validate_membership,
)
from .solutions import (
    SOC,
    Pmas,
    Solution,
    builtin_counterexamples,
    check_efficiency,
    check_null_player,
    check_p_monotonicity,
    check_p_transfer,
    modified_soc,
    pmas_soc,
    shapley,
)
from .verify import (
    CoreBounds,
    PropertyReport,
    core_bounds,
    core_contains,
    core_nonempty,
    is_concave,
    is_convex,
    is_monotone,
    is_permutationally_concave,
    is_subadditive,
    is_superadditive,
    is_totally_balanced,
    single_payer_core_certificate,
)

__version__ = "0.1.0"
