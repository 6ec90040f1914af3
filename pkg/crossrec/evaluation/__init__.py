from crossrec.evaluation.metrics import (
    recall_at_k,
    ndcg_at_k,
    empirical_target_risk,
    popularity_baseline,
    rank_items,
)
from crossrec.evaluation.report import EvalReport, aggregate, sign_test, write_reports, read_reports
