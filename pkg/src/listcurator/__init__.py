"""Multi-view recommendation engine for curating social-network user lists.

A seed list of users is expanded by exploring the surrounding network
under fetch budgets, ranking candidates over four graph views (friend,
mention, retweet, co-listed), aggregating the rankings with an SVD rank
matrix, and looping recommend/select/update with a curator (or automatic
top-k selector) in the loop.
"""

from .aggregation import (
    BatchItem,
    FilterConfig,
    IterationRecord,
    RankMatrix,
    RecommendationBatch,
    apply_filters,
    build_rank_matrix,
    recommend,
    svd_aggregate,
)
from .evaluation import (
    EvalReport,
    SiloReport,
    crossval_split,
    precision_recall,
    run_crossval_experiment,
    run_silo_experiment,
)
from .generator import GeneratorConfig, generate
from .ranking import (
    Criterion,
    HitsParams,
    Ranking,
    hits_with_priors,
    normalized_indegree,
    weighted_indegree,
)
from .session import (
    CurationSession,
    ExplorationBudgets,
    bootstrap,
    load_checkpoint,
    run_auto,
    save_checkpoint,
    select,
    update,
)
from .snapshot import (
    FollowEdge,
    ListRecord,
    SnapshotStore,
    TweetRecord,
    UserId,
    UserRecord,
    load_snapshot,
    save_snapshot,
)
from .views import (
    CoreSets,
    ViewGraph,
    ViewKind,
    build_colist_graph,
    build_friend_graph,
    build_mention_graph,
    build_retweet_graph,
)

__version__ = "0.1.0"
