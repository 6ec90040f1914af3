'''Run-level configuration: one YAML file with a section per pipeline stage.

    synth:    SynthConfig      synthetic task generation
    features: FeaturesConfig   vocabulary capacities and playtime buckets
    model:    DsnConfig        DSN layer widths and dropout
    sdae:     SdaeConfig       SDAE architecture and pretraining
    train:    TrainConfig      optimizer, loss weights, weight-decay grid, selection
    eval:     EvalConfig       methods, seeds and cutoffs of the experiment

Every key can be overridden from the command line with "section.key=value".
'''
from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, Field, ConfigDict, ValidationError, model_validator

from crossrec.enums import Method
from crossrec.errors import ConfigError
from crossrec.models.model_config import DsnConfig, SdaeConfig
from crossrec.synth.synth_config import SynthConfig
from crossrec.training.train_config import TrainConfig
from crossrec.utils.utils import load_yaml_file, parse_overrides, deep_update


class FeaturesConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    user_vocab_capacity: int = Field(default=50_000, ge=1, description='discriminative words kept for user histories')
    item_vocab_capacity: int = Field(default=20_000, ge=1, description='words kept for item text')
    playtime_hours: int = Field(default=24, ge=1)
    playtime_minutes: int = Field(default=60, ge=1)
    playtime_seconds: int = Field(default=60, ge=1)


class EvalConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    methods: list[Method] = Field(default_factory=lambda: list(Method))
    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])
    ks: list[int] = Field(default_factory=lambda: [1, 10, 50, 100])
    test_fraction: float = Field(default=0.8, gt=0.0, le=1.0, description='share of the test set sampled per seed')
    init_unseen_from_sdae: bool = Field(default=False, description='copy SDAE codes into softmax rows of never-seen labels before testing')

    @model_validator(mode='after')
    def validate_after(self):
        assert self.methods, 'methods must not be empty'
        assert self.seeds, 'seeds must not be empty'
        assert all(k >= 1 for k in self.ks), f'ks must be >= 1, got {self.ks}'
        return self


class RunConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    synth: SynthConfig = Field(default_factory=SynthConfig)
    features: FeaturesConfig = Field(default_factory=FeaturesConfig)
    model: DsnConfig = Field(default_factory=DsnConfig)
    sdae: SdaeConfig = Field(default_factory=SdaeConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)

    @model_validator(mode='after')
    def validate_after(self):
        assert self.model.code_dim == self.sdae.code_dim, f'model.code_dim={self.model.code_dim} must equal sdae.code_dim={self.sdae.code_dim}'
        return self

    def with_seed(self, seed: int) -> RunConfig:
        '''Same config with every stage seeded by `seed`'''
        return self.model_copy(update={
            'synth': self.synth.model_copy(update={'seed': seed}),
            'sdae': self.sdae.model_copy(update={'seed': seed}),
            'train': self.train.model_copy(update={'seed': seed}),
        })

    def to_dict(self) -> dict:
        return self.model_dump(mode='json')


def load_run_config(file_path: str | Path | None = None, overrides: tuple[str, ...] | list[str] = ()) -> RunConfig:
    data = {}
    if file_path is not None:
        if not Path(file_path).is_file():
            raise ConfigError(f'config file {file_path} does not exist')
        data = load_yaml_file(file_path) or {}
        if not isinstance(data, dict):
            raise ConfigError(f'{file_path} must hold a single mapping of sections')
    data = deep_update(data, parse_overrides(overrides))
    try:
        return RunConfig(**data)
    except ValidationError as err:
        raise ConfigError(f'invalid run config:\n{err}') from err
