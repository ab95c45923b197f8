"""Laboratory for the binary-inquiry cost of tournament search problems.

Find kings, zero in-degree vertices, and maximum-out-degree vertices in an
unknown tournament by asking one edge orientation at a time; measure how many
inquiries that costs against static and adversarial oracles; and verify the
worst-case bounds exactly at small sizes with a minimax solver.
"""

from .adversary import (
    AdversaryState,
    DegreeDeficitReport,
    Refutation,
    attempt_refutation,
    boost_completion,
    degree_deficit_audit,
    in_degree_threshold,
    make_adversary,
    mod_query_lower_bound,
    open_adversary_session,
    out_degree_threshold,
    suppress_completion,
)
from .algorithms import (
    OUTCOME_CERTIFIED_MOD,
    OUTCOME_FOUND,
    OUTCOME_NOT_FOUND,
    REFUTABLE,
    SOUND,
    AlgorithmRun,
    find_mod_certified,
    find_mod_exhaustive,
    find_zero_indegree,
    knockout_survivor,
    verify_claim,
)
from .cli import (
    ExperimentConfig,
    ResultRow,
    emit_bound_table,
    generate_random_tournament,
    run_experiment,
    serve_oracle_stdio,
    splitmix64,
    transcript_to_client_script,
)
from .core import (
    Tournament,
    all_pairs,
    all_tournaments,
    make_almost_regular,
    make_rotational_regular,
    make_transitive,
    pair_count,
    pair_index,
)
from .exact import (
    GameState,
    GameValue,
    StrategyTree,
    TaskPredicate,
    exact_complexity,
    parse_strategy,
    terminal_mod,
    terminal_zero_indegree,
)
from .oracle import (
    COMPLETION_LIMIT,
    BudgetExceededError,
    CompletionLimitError,
    KnowledgeState,
    OracleSession,
    Transcript,
    completions,
    open_static_session,
)

__version__ = "0.1.0"
