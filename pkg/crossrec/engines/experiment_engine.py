from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from scipy import sparse
    from crossrec.run_config import RunConfig
    from crossrec.features.dataset import TaskData
    from crossrec.features.vectorizer import FeatureSpace
    from crossrec.evaluation.report import EvalReport
    from crossrec.training.trainer import GridSearchResult

import copy
import functools
import logging
from pathlib import Path
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from crossrec.enums import Domain, Method
from crossrec.errors import EmptyDataError
from crossrec.models.dsn import DsnModel, init_unseen_from_sdae
from crossrec.models.sdae import SdaeModel
from crossrec.nn import Rng
from crossrec.training.dataset import DomainData, split_train_val
from crossrec.training.trainer import grid_search, pretrain_sdae


logger = logging.getLogger('crossrec.eval')


@dataclass
class PreparedData:
    '''Feature matrices of every split of a task'''
    source: DomainData
    target: DomainData
    test: DomainData
    # common-user validation set, None = validate on a source split
    val: DomainData | None
    item_features: sparse.csr_matrix
    num_labels: int

    @property
    def input_dim(self) -> int:
        return self.source.input_dim


def prepare_data(task: TaskData, features: FeatureSpace) -> PreparedData:
    catalogs = task.catalogs
    if not task.source or not task.target or not task.test:
        raise EmptyDataError('task needs source, target and test examples')

    def _labeled(examples, domain):
        X = features.user_matrix([e.history for e in examples], catalogs)
        return DomainData(X, domain, task.label_indices(examples))

    return PreparedData(
        source=_labeled(task.source, Domain.SOURCE),
        target=DomainData(features.user_matrix([e.history for e in task.target], catalogs), Domain.TARGET),
        test=_labeled(task.test, Domain.TARGET),
        val=_labeled(task.val, Domain.TARGET) if task.val else None,
        item_features=features.item_matrix(catalogs[Domain.SOURCE]),
        num_labels=task.num_labels,
    )


def test_subset(test: DomainData, fraction: float, seed: int) -> DomainData:
    '''Uniform sample of round(fraction·n) test examples, drawn per seed'''
    n = len(test)
    size = max(1, round(fraction * n))
    if size >= n:
        return test
    rows = np.sort(Rng(seed, 3).generator.choice(n, size=size, replace=False))
    return test.subset(rows)


class ExperimentEngine:
    '''Runs every configured method over every seed and collects one EvalReport per (method, seed).

    Each (seed) run owns its models; with num_workers > 1 seeds run on a thread pool and
    the reports are merged afterwards in seed order.
    '''
    def __init__(
        self,
        config: RunConfig,
        data: PreparedData,
        out_dir: str | Path | None = None,
        num_workers: int = 1,
        sdae: SdaeModel | None = None,
    ):
        self.config = config
        self.data = data
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.num_workers = num_workers
        # pretrained SDAE shared by every seed, otherwise pretrained per seed
        self._sdae = sdae

    def build_model(self, seed: int) -> DsnModel:
        '''Freshly initialized DSN, identical for every call with the same seed'''
        return DsnModel(self.data.input_dim, self.data.num_labels, self.config.model, rng=Rng(seed, 0))

    def splits(self, seed: int) -> tuple[DomainData, DomainData, DomainData]:
        '''(training source, validation, test subset) of a seed'''
        if self.data.val is not None:
            source, val = self.data.source, self.data.val
        else:
            source, val = split_train_val(self.data.source, self.config.train.val_fraction, seed)
        return source, val, test_subset(self.data.test, self.config.eval.test_fraction, seed)

    def sdae_for_seed(self, seed: int) -> SdaeModel:
        if self._sdae is not None:
            return copy.deepcopy(self._sdae)
        run_config = self.config.with_seed(seed)
        sdae, trace = pretrain_sdae(self.data.item_features, run_config.sdae, run_config.train)
        if trace:
            logger.debug(f'seed {seed}: pretrained SDAE, final loss {trace[-1]:.6f}')
        return sdae

    def train_method(self, method: Method, seed: int, source: DomainData, val: DomainData, sdae: SdaeModel | None = None) -> GridSearchResult:
        train_config = self.config.with_seed(seed).train
        weights = train_config.loss_weights.for_method(method)
        checkpoint_dir = self.out_dir / 'checkpoints' / f'seed={seed}' / str(method) if self.out_dir is not None else None
        return grid_search(
            functools.partial(self.build_model, seed),
            sdae if method.uses_sdae() else None,
            source,
            self.data.target,
            train_config,
            val,
            item_features=self.data.item_features if method.uses_sdae() else None,
            loss_weights=weights,
            checkpoint_dir=checkpoint_dir,
        )

    def run_seed(self, seed: int) -> list[EvalReport]:
        from crossrec.evaluation.evaluator import evaluate_model, evaluate_popularity
        source, val, test = self.splits(seed)
        ks = self.config.eval.ks
        sdae = None
        if any(Method(m).uses_sdae() for m in self.config.eval.methods):
            sdae = self.sdae_for_seed(seed)
        reports = []
        for method in map(Method, self.config.eval.methods):
            if not method.needs_model():
                report = evaluate_popularity(seed, source.labels, self.data.num_labels, test.labels, ks)
            else:
                result = self.train_method(method, seed, source, val, sdae)
                model = result.best.load_model(template=self.build_model(seed))
                if method.uses_sdae() and self.config.eval.init_unseen_from_sdae:
                    trained_sdae = result.best.load_sdae(template=sdae)
                    codes = trained_sdae.encode(self.data.item_features.toarray())
                    init_unseen_from_sdae(model, codes, source.labels)
                report = evaluate_model(method, seed, model, test.X, test.labels, ks)
            logger.info(
                f'seed {seed} {method}: recall@{max(ks)}={report.recall[max(ks)]:.4f} '
                f'ndcg@{max(ks)}={report.ndcg[max(ks)]:.4f} risk={report.empirical_target_risk:.4f}'
            )
            reports.append(report)
        return reports

    def run(self) -> list[EvalReport]:
        seeds = list(self.config.eval.seeds)
        if self.num_workers > 1 and len(seeds) > 1:
            with ThreadPoolExecutor(max_workers=self.num_workers) as executor:
                per_seed = list(executor.map(self.run_seed, seeds))
        else:
            per_seed = [self.run_seed(seed) for seed in seeds]
        reports = [report for reports in per_seed for report in reports]
        if self.out_dir is not None:
            self.write(reports)
        return reports

    def write(self, reports: list[EvalReport]):
        from crossrec.evaluation.report import write_reports
        from crossrec.utils.artifacts import write_manifest, echo_config
        reports_dir = self.out_dir / 'reports'
        write_reports(reports, reports_dir)
        echo_config(reports_dir, self.config.to_dict())
        write_manifest(reports_dir)
        checkpoints_dir = self.out_dir / 'checkpoints'
        if checkpoints_dir.is_dir():
            write_manifest(checkpoints_dir)
        logger.info(f'wrote {len(reports)} reports to {reports_dir}')
