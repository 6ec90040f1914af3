from __future__ import annotations

from pydantic import BaseModel, Field, ConfigDict, model_validator

from crossrec.enums import Method


class SdaeConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    hidden_dims: list[int] = Field(default_factory=lambda: [256], description='encoder hidden widths between the item vector and the code, mirrored by the decoder')
    code_dim: int = Field(default=64, ge=1, description='item code length, must equal the DSN code_dim')
    input_corruption: float = Field(default=0.9, ge=0.0, lt=1.0, description='mask-out probability applied to input entries')
    hidden_dropout: float = Field(default=0.5, ge=0.0, lt=1.0, description='dropout on hidden layers while training')
    epochs: int = Field(default=20, ge=1)
    batch_size: int = Field(default=128, ge=1)
    lr: float = Field(default=1e-3, gt=0.0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode='after')
    def validate_after(self):
        assert all(d >= 1 for d in self.hidden_dims), f'hidden_dims must be positive, got {self.hidden_dims}'
        return self


class DsnConfig(BaseModel):
    '''Layer widths of every DSN sub-network; input/output dims come from the data.'''
    model_config = ConfigDict(extra='forbid')

    code_dim: int = Field(default=64, ge=1, description='width of h_c, h_p, u and of each softmax weight row')
    encoder_hidden: list[int] = Field(default_factory=lambda: [256, 128, 128])
    decoder_hidden: list[int] = Field(default_factory=lambda: [128, 128, 256])
    classifier_hidden: list[int] = Field(default_factory=lambda: [256, 256, 256])
    discriminator_hidden: list[int] = Field(default_factory=lambda: [1024, 1024])
    encoder_dropout: float = Field(default=0.75, ge=0.0, lt=1.0, description='dropout of the shared and both private encoders')
    decoder_dropout: float = Field(default=0.5, ge=0.0, lt=1.0)
    classifier_dropout: float = Field(default=0.5, ge=0.0, lt=1.0)
    discriminator_dropout: float = Field(default=0.5, ge=0.0, lt=1.0, description='hidden layers of the domain discriminator, same rate as the decoder and classifier')

    @model_validator(mode='after')
    def validate_after(self):
        for name in ('encoder_hidden', 'decoder_hidden', 'classifier_hidden', 'discriminator_hidden'):
            widths = getattr(self, name)
            assert all(w >= 1 for w in widths), f'{name} must be positive, got {widths}'
        return self


class LossWeights(BaseModel):
    '''Weights of E = L_task + α·L_recon + β·L_difference + γ·L_similarity + λ_item·L_item + λ_IR·L_IR,
    plus the weight decay applied by the trainer.
    '''
    model_config = ConfigDict(extra='forbid', allow_inf_nan=False, frozen=True)

    alpha: float = Field(default=1e-3, ge=0.0, description='reconstruction')
    beta: float = Field(default=1e-2, ge=0.0, description='difference (subspace orthogonality)')
    gamma: float = Field(default=100.0, ge=0.0, description='adversarial similarity')
    lambda_item: float = Field(default=1e-2, ge=0.0, description='softmax rows anchored to item codes')
    lambda_ir: float = Field(default=100.0, ge=0.0, description='item reconstruction of the SDAE')
    weight_decay: float = Field(default=0.0, ge=0.0)

    def for_method(self, method: Method | str) -> LossWeights:
        '''Method presets only zero out loss terms, everything else is shared.'''
        method = Method(method)
        if method == Method.I_DSN:
            return self
        elif method == Method.DSN:
            return self.model_copy(update={'lambda_item': 0.0, 'lambda_ir': 0.0})
        elif method == Method.NN:
            return self.model_copy(update={'beta': 0.0, 'gamma': 0.0, 'lambda_item': 0.0, 'lambda_ir': 0.0})
        else:
            raise ValueError(f'{method} has no loss weights, it does not train a model')

    def with_weight_decay(self, weight_decay: float) -> LossWeights:
        return self.model_copy(update={'weight_decay': weight_decay})
