from __future__ import annotations
from typing import TYPE_CHECKING, Callable
if TYPE_CHECKING:
    from scipy import sparse
    from crossrec.models.sdae import SdaeModel

import copy
import logging
from pathlib import Path
from dataclasses import dataclass, field

import numpy as np

from crossrec.enums import SelectionCriterion
from crossrec.errors import EmptyDataError, MissingMetricError
from crossrec.evaluation.evaluator import validation_metrics
from crossrec.models.dsn import DsnModel, total_loss, weight_decay_penalty
from crossrec.models.model_config import LossWeights
from crossrec.nn import Rng, Adam
from crossrec.training.candidates import sample_candidates
from crossrec.training.dataset import DomainData, epoch_order, cycled_batches, num_steps_per_epoch
from crossrec.training.train_config import TrainConfig
from crossrec.utils.utils import short_path


logger = logging.getLogger('crossrec.train')

METRICS_FILENAME = 'metrics.tsv'
LOSS_NAMES = ('L_task', 'L_recon', 'L_difference', 'L_similarity', 'L_item', 'L_IR', 'E', 'L_wd')


@dataclass
class Checkpoint:
    step: int
    epoch: int
    weight_decay: float
    metrics: dict[str, float]
    path: Path | None = None
    # in-memory parameter snapshot, kept when no checkpoint directory is given
    state: dict[str, np.ndarray] | None = field(default=None, repr=False)
    # the jointly trained SDAE at this checkpoint; both stay None when the SDAE is frozen
    sdae_path: Path | None = None
    sdae_state: dict[str, np.ndarray] | None = field(default=None, repr=False)

    def load_model(self, template: DsnModel | None = None) -> DsnModel:
        if self.path is not None:
            return DsnModel.load(self.path)
        if self.state is None or template is None:
            raise ValueError('checkpoint has neither a file nor an in-memory snapshot with a template model')
        model = copy.deepcopy(template)
        model.load_state_dict(self.state)
        return model

    def load_sdae(self, template: SdaeModel | None = None) -> SdaeModel | None:
        '''The SDAE this checkpoint was trained against, `template` itself when it was frozen.'''
        from crossrec.models.sdae import SdaeModel
        if self.sdae_path is not None:
            return SdaeModel.load(self.sdae_path)
        if self.sdae_state is None:
            return template
        if template is None:
            raise ValueError('an in-memory SDAE snapshot needs a template model')
        sdae = copy.deepcopy(template)
        sdae.load_state_dict(self.sdae_state)
        return sdae


@dataclass
class TrainTrace:
    # one dict per step: epoch, step and every loss component (unnormalized batch sums)
    steps: list[dict[str, float]] = field(default_factory=list)
    # mean E per example for every epoch
    epoch_losses: list[float] = field(default_factory=list)
    checkpoints: list[Checkpoint] = field(default_factory=list)

    def series(self, name: str) -> np.ndarray:
        return np.array([s[name] for s in self.steps], dtype=np.float64)


def _metrics_columns(ks: list[int]) -> list[str]:
    return ['ce', *(f'ndcg@{k}' for k in ks), *(f'recall@{k}' for k in ks)]


def write_metrics_index(checkpoints: list[Checkpoint], file_path: str | Path, ks: list[int]):
    columns = _metrics_columns(ks)
    with open(file_path, 'w', encoding='utf-8') as f:
        f.write('\t'.join(['weight_decay', 'epoch', 'step', *columns, 'path']) + '\n')
        for ckpt in checkpoints:
            values = [repr(float(ckpt.metrics[c])) if c in ckpt.metrics else '' for c in columns]
            path = ckpt.path.as_posix() if ckpt.path is not None else ''
            f.write('\t'.join([repr(float(ckpt.weight_decay)), str(ckpt.epoch), str(ckpt.step), *values, path]) + '\n')


def train(
    model: DsnModel,
    sdae: SdaeModel | None,
    source_data: DomainData,
    target_data: DomainData,
    config: TrainConfig,
    val_data: DomainData,
    item_features: sparse.csr_matrix | np.ndarray | None = None,
    loss_weights: LossWeights | None = None,
    checkpoint_dir: str | Path | None = None,
) -> tuple[Checkpoint, TrainTrace]:
    '''Adam on E + weight_decay·Σ||W||², one source and one target batch per step.

    The SDAE joins the objective only when λ_item or λ_IR is non-zero; its params are
    updated only when config.joint_sdae is on, and then snapshotted with every checkpoint.
    A frozen SDAE has its gradients dropped after every step.

    Returns:
        (checkpoint selected by config.selection_criterion, trace)
    '''
    weights = loss_weights or config.loss_weights
    if len(source_data) == 0 or len(target_data) == 0:
        raise EmptyDataError(f'need source and target examples, got {len(source_data)} and {len(target_data)}')
    if len(val_data) == 0:
        raise EmptyDataError('validation data is empty')
    if source_data.labels is None or val_data.labels is None:
        raise ValueError('source and validation data must be labeled')
    use_sdae = sdae is not None and item_features is not None and (weights.lambda_item > 0 or weights.lambda_ir > 0)
    params = list(model.params)
    joint_sdae = use_sdae and config.joint_sdae
    if joint_sdae:
        params += sdae.params
    optimizer = Adam(params, lr=config.lr)
    L = model.num_labels
    S = config.candidate_count
    if S is not None and S > L:
        raise ValueError(f'candidate_count={S} exceeds the number of labels {L}')
    if checkpoint_dir is not None:
        checkpoint_dir = Path(checkpoint_dir)
        checkpoint_dir.mkdir(parents=True, exist_ok=True)

    trace = TrainTrace()
    target_batches = cycled_batches(len(target_data), config.batch_size, config.seed, stream=1)
    steps_per_epoch = num_steps_per_epoch(len(source_data), config.batch_size)
    step = 0
    for epoch in range(config.epochs):
        order = epoch_order(len(source_data), config.seed, epoch, stream=0)
        epoch_total = 0.0
        for i in range(steps_per_epoch):
            source_batch = source_data.batch(order[i * config.batch_size:(i + 1) * config.batch_size], item_features if use_sdae else None)
            target_batch = target_data.batch(next(target_batches))
            step_rng = Rng(config.seed, 2, epoch, i)
            candidates = None
            if S is not None and S < L:
                candidates = sample_candidates(L, S, source_batch.labels, step_rng.child(1))
            optimizer.zero_grad()
            components = total_loss(
                model, sdae if use_sdae else None, source_batch, target_batch, weights,
                rng=step_rng.child(0), training=True, candidates=candidates,
            )
            l_wd = weight_decay_penalty(params, weights.weight_decay)
            optimizer.step()
            if use_sdae and not joint_sdae:
                sdae.zero_grad()
            step += 1
            trace.steps.append({'epoch': epoch, 'step': step, **components.to_dict(), 'L_wd': l_wd})
            epoch_total += components.E
        trace.epoch_losses.append(epoch_total / len(source_data))

        metrics = validation_metrics(model, val_data.X, val_data.labels, config.eval_ks)
        ckpt = Checkpoint(step=step, epoch=epoch + 1, weight_decay=weights.weight_decay, metrics=metrics)
        if checkpoint_dir is not None:
            ckpt.path = checkpoint_dir / f'epoch-{epoch + 1}.npz'
            model.dump(ckpt.path)
            if joint_sdae:
                ckpt.sdae_path = checkpoint_dir / f'epoch-{epoch + 1}.sdae.npz'
                sdae.dump(ckpt.sdae_path)
        else:
            ckpt.state = model.state_dict()
            if joint_sdae:
                ckpt.sdae_state = sdae.state_dict()
        trace.checkpoints.append(ckpt)
        logger.info(
            f'wd={weights.weight_decay:g} epoch {epoch + 1}/{config.epochs}: '
            f'E/example={trace.epoch_losses[-1]:.5f} val ce={metrics["ce"]:.5f} '
            + ' '.join(f'{k}={v:.4f}' for k, v in metrics.items() if k.startswith('ndcg'))
        )
    best = select_model(trace.checkpoints, config.selection_criterion)
    return best, trace


def select_model(checkpoints: list[Checkpoint], criterion: SelectionCriterion | str) -> Checkpoint:
    '''min CE or max nDCG@100; ties keep the earliest checkpoint.'''
    criterion = SelectionCriterion(criterion)
    if not checkpoints:
        raise EmptyDataError('no checkpoints to select from')
    metric = criterion.metric_name
    best, best_value = None, None
    for ckpt in checkpoints:
        if metric not in ckpt.metrics:
            raise MissingMetricError(f'checkpoint at step {ckpt.step} has no {metric!r} metric')
        value = ckpt.metrics[metric]
        if best is None:
            is_better = True
        elif criterion.is_minimized():
            is_better = value < best_value
        else:
            is_better = value > best_value
        if is_better:
            best, best_value = ckpt, value
    return best


@dataclass
class GridSearchResult:
    best: Checkpoint
    checkpoints: list[Checkpoint]
    traces: dict[float, TrainTrace]


def grid_search(
    build_model: Callable[[], DsnModel],
    sdae: SdaeModel | None,
    source_data: DomainData,
    target_data: DomainData,
    config: TrainConfig,
    val_data: DomainData,
    item_features: sparse.csr_matrix | np.ndarray | None = None,
    loss_weights: LossWeights | None = None,
    checkpoint_dir: str | Path | None = None,
) -> GridSearchResult:
    '''One fresh model per weight decay, every epoch checkpoint pooled for selection.'''
    weights = loss_weights or config.loss_weights
    pool, traces = [], {}
    for wd in config.weight_decay_grid:
        # every grid point starts from its own copy of the pretrained SDAE
        run_sdae = copy.deepcopy(sdae) if sdae is not None else None
        run_dir = Path(checkpoint_dir) / f'wd={wd:g}' if checkpoint_dir is not None else None
        _, trace = train(
            build_model(), run_sdae, source_data, target_data, config, val_data,
            item_features=item_features, loss_weights=weights.with_weight_decay(wd), checkpoint_dir=run_dir,
        )
        pool.extend(trace.checkpoints)
        traces[wd] = trace
    if checkpoint_dir is not None:
        metrics_path = Path(checkpoint_dir) / METRICS_FILENAME
        write_metrics_index(pool, metrics_path, config.eval_ks)
        logger.debug(f'wrote checkpoint index {short_path(metrics_path)}')
    best = select_model(pool, config.selection_criterion)
    logger.info(f'selected wd={best.weight_decay:g} epoch {best.epoch} by {config.selection_criterion.metric_name}={best.metrics[config.selection_criterion.metric_name]:.5f}')
    return GridSearchResult(best=best, checkpoints=pool, traces=traces)


def pretrain_sdae(item_features, sdae_config, config: TrainConfig) -> tuple[SdaeModel, list[float]]:
    '''Jointly trained SDAEs get a short warm-up, frozen ones their full epoch budget.'''
    from crossrec.models.sdae import train_sdae
    epochs = config.sdae_pretrain_epochs if config.joint_sdae else sdae_config.epochs
    if epochs == 0:
        from crossrec.models.sdae import SdaeModel
        return SdaeModel(item_features.shape[1], sdae_config, rng=Rng(sdae_config.seed).child(0)), []
    return train_sdae(item_features, sdae_config, epochs=epochs)
