from __future__ import annotations

from pydantic import BaseModel, Field, ConfigDict, model_validator

from crossrec.enums import SelectionCriterion
from crossrec.models.model_config import LossWeights


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    epochs: int = Field(default=10, ge=1)
    batch_size: int = Field(default=128, ge=1, description='examples per source batch and per target batch, the loss weights are calibrated to it')
    lr: float = Field(default=1e-3, gt=0.0)
    seed: int = Field(default=0, ge=0)
    loss_weights: LossWeights = Field(default_factory=LossWeights)
    candidate_count: int | None = Field(default=None, ge=1, description='S, labels per sampled softmax; None = full softmax over all L labels')
    weight_decay_grid: list[float] = Field(default_factory=lambda: [1e-1, 1e-2, 1e-3, 1e-4])
    selection_criterion: SelectionCriterion = SelectionCriterion.ndcg_at_100
    joint_sdae: bool = Field(default=True, description='keep training the SDAE inside the DSN objective after pretraining')
    sdae_pretrain_epochs: int = Field(default=5, ge=0, description='SDAE epochs before joint training, ignored when joint_sdae is off')
    val_fraction: float = Field(default=0.2, gt=0.0, lt=1.0, description='source split used for validation when no common-user validation set exists')
    eval_ks: list[int] = Field(default_factory=lambda: [1, 10, 50, 100])

    @model_validator(mode='after')
    def validate_after(self):
        assert self.weight_decay_grid, 'weight_decay_grid must not be empty'
        assert all(wd >= 0 for wd in self.weight_decay_grid), f'weight decays must be non-negative, got {self.weight_decay_grid}'
        assert all(k >= 1 for k in self.eval_ks), f'eval_ks must be >= 1, got {self.eval_ks}'
        assert 100 in self.eval_ks or self.selection_criterion != SelectionCriterion.ndcg_at_100, 'ndcg@100 selection needs 100 in eval_ks'
        return self
