from __future__ import annotations

from pydantic import BaseModel, Field, ConfigDict, model_validator


class SynthConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    num_items: int = Field(default=200, ge=1, description='L, source items (the label space)')
    num_target_items: int = Field(default=200, ge=1, description='L_T, target items users of the target service consume')
    num_topics: int = Field(default=12, ge=1, description='T')
    source_vocab_size: int = Field(default=1000, ge=1, description='V_S')
    target_vocab_size: int = Field(default=1000, ge=1, description='V_T')
    n_source: int = Field(default=20000, ge=1, description='labeled source examples')
    n_target: int = Field(default=20000, ge=1, description='unlabeled target examples')
    n_test: int = Field(default=2000, ge=1, description='common-user test examples')
    n_val: int = Field(default=500, ge=0, description='common-user validation examples, 0 = validate on a source split')
    history_min: int = Field(default=3, ge=1)
    history_max: int = Field(default=10, ge=1)
    shift: float = Field(default=0.6, ge=0.0, le=1.0, description='s, weight of the permuted preferences in target users')
    vocab_overlap: float = Field(default=0.5, ge=0.0, le=1.0, description='ρ, share of target topic-word mass on source token ids')
    temperature: float = Field(default=5.0, gt=0.0, description='c in P(item) ∝ exp(c·<p_u, ψ_k>)')
    topic_word_concentration: float = Field(default=0.1, gt=0.0)
    item_topic_concentration: float = Field(default=0.3, gt=0.0)
    user_topic_concentration: float = Field(default=0.3, gt=0.0)
    item_text_length: int = Field(default=30, ge=2, description='tokens per item text, the first 5 form the title')
    cast_size: int = Field(default=2, ge=0, description='cast names per source item')
    max_label_share: float = Field(default=0.2, gt=0.0, le=1.0, description='no single item may exceed this share of source labels')
    max_redraws: int = Field(default=10, ge=1)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode='after')
    def validate_after(self):
        assert self.history_min <= self.history_max, f'history_min={self.history_min} must be <= history_max={self.history_max}'
        return self
