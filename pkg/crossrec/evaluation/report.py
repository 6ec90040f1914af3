from __future__ import annotations
from typing import Sequence

from pathlib import Path
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from crossrec.enums import Method
from crossrec.utils.utils import dump_yaml_file, load_yaml_file


REPORT_FILENAME = 'report.yml'
RESULTS_FILENAME = 'results.tsv'
SUMMARY_FILENAME = 'summary.tsv'
RESULTS_HEADER = ('method', 'K', 'metric', 'value', 'seed')


@dataclass
class EvalReport:
    method: Method
    seed: int
    n_test: int
    recall: dict[int, float] = field(default_factory=dict)
    ndcg: dict[int, float] = field(default_factory=dict)
    empirical_target_risk: float = 0.0

    def __post_init__(self):
        self.method = Method(self.method)
        for name in ('recall', 'ndcg'):
            values = [v for _, v in sorted(getattr(self, name).items())]
            assert all(0.0 <= v <= 1.0 for v in values), f'{name} values must be in [0, 1]'
            assert all(a <= b for a, b in zip(values, values[1:])), f'{name}@K must be non-decreasing in K'

    def to_dict(self) -> dict:
        return {
            'method': str(self.method),
            'seed': self.seed,
            'n_test': self.n_test,
            'recall': {int(k): float(v) for k, v in self.recall.items()},
            'ndcg': {int(k): float(v) for k, v in self.ndcg.items()},
            'empirical_target_risk': float(self.empirical_target_risk),
        }

    @classmethod
    def from_dict(cls, data: dict) -> EvalReport:
        return cls(
            method=data['method'],
            seed=data['seed'],
            n_test=data['n_test'],
            recall={int(k): v for k, v in data['recall'].items()},
            ndcg={int(k): v for k, v in data['ndcg'].items()},
            empirical_target_risk=data['empirical_target_risk'],
        )

    def to_rows(self) -> list[tuple[str, int, str, float, int]]:
        rows = [(str(self.method), k, 'recall', float(v), self.seed) for k, v in sorted(self.recall.items())]
        rows += [(str(self.method), k, 'ndcg', float(v), self.seed) for k, v in sorted(self.ndcg.items())]
        rows.append((str(self.method), 1, 'empirical_target_risk', float(self.empirical_target_risk), self.seed))
        return rows


def _sort_key(report: EvalReport) -> tuple[int, int]:
    return (list(Method).index(report.method), report.seed)


def write_reports(reports: list[EvalReport], dir_path: str | Path) -> list[Path]:
    '''Writes the structured report and the flat results table; output depends only on `reports`.'''
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    reports = sorted(reports, key=_sort_key)
    report_path = dir_path / REPORT_FILENAME
    dump_yaml_file(report_path, {'reports': [report.to_dict() for report in reports]})
    results_path = dir_path / RESULTS_FILENAME
    with open(results_path, 'w', encoding='utf-8') as f:
        f.write('\t'.join(RESULTS_HEADER) + '\n')
        for report in reports:
            for method, k, metric, value, seed in report.to_rows():
                f.write(f'{method}\t{k}\t{metric}\t{value!r}\t{seed}\n')
    summary_path = dir_path / SUMMARY_FILENAME
    with open(summary_path, 'w', encoding='utf-8') as f:
        f.write('method\tK\tmetric\tmean\tsd\tnum_seeds\n')
        for row in aggregate(reports):
            f.write(f'{row.method}\t{row.K}\t{row.metric}\t{row.mean!r}\t{row.sd!r}\t{row.num_seeds}\n')
    return [report_path, results_path, summary_path]


def read_reports(dir_path: str | Path) -> list[EvalReport]:
    data = load_yaml_file(Path(dir_path) / REPORT_FILENAME) or {}
    return [EvalReport.from_dict(d) for d in data.get('reports', [])]


@dataclass(frozen=True)
class AggregateRow:
    method: str
    K: int
    metric: str
    mean: float
    sd: float
    num_seeds: int


def aggregate(reports: list[EvalReport]) -> list[AggregateRow]:
    '''mean ± sample standard deviation over seeds per (method, K, metric)'''
    grouped: dict[tuple[str, int, str], list[float]] = defaultdict(list)
    for report in sorted(reports, key=_sort_key):
        for method, k, metric, value, _seed in report.to_rows():
            grouped[(method, k, metric)].append(value)
    rows = []
    for (method, k, metric), values in grouped.items():
        values = np.asarray(values, dtype=np.float64)
        sd = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
        rows.append(AggregateRow(method, k, metric, float(np.mean(values)), sd, int(values.size)))
    return rows


@dataclass(frozen=True)
class SignTestResult:
    wins: int
    losses: int
    ties: int
    p_value: float


def sign_test(a: Sequence[float], b: Sequence[float]) -> SignTestResult:
    '''One-sided paired sign test of "a > b"; ties are dropped.'''
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f'paired samples must have the same length, got {a.shape} and {b.shape}')
    wins, losses = int(np.sum(a > b)), int(np.sum(a < b))
    ties = int(a.size - wins - losses)
    if wins + losses == 0:
        return SignTestResult(wins, losses, ties, 1.0)
    p_value = stats.binomtest(wins, wins + losses, 0.5, alternative='greater').pvalue
    return SignTestResult(wins, losses, ties, float(p_value))
