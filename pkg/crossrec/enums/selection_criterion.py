from enum import StrEnum


class SelectionCriterion(StrEnum):
    cross_entropy = 'cross_entropy'
    ndcg_at_100 = 'ndcg_at_100'

    @property
    def metric_name(self) -> str:
        return 'ce' if self == SelectionCriterion.cross_entropy else 'ndcg@100'

    def is_minimized(self) -> bool:
        return self == SelectionCriterion.cross_entropy
