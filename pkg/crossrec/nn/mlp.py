from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from crossrec.nn.rng import Rng

from dataclasses import dataclass, field

import numpy as np

from crossrec.enums import Activation
from crossrec.errors import ShapeMismatchError
from crossrec.nn.param import Param
from crossrec.nn.functional import elu, elu_grad, dropout_apply, he_init, check_rate


@dataclass(eq=False)
class DenseLayer:
    weight: Param
    bias: Param
    activation: Activation
    dropout: float

    @property
    def input_dim(self) -> int:
        return self.weight.shape[0]

    @property
    def output_dim(self) -> int:
        return self.weight.shape[1]

    def activate(self, pre: np.ndarray) -> np.ndarray:
        return elu(pre) if self.activation == Activation.ELU else pre

    def activate_grad(self, pre: np.ndarray) -> np.ndarray | float:
        return elu_grad(pre) if self.activation == Activation.ELU else 1.0


@dataclass
class MlpCache:
    '''Everything the backward pass needs from one forward call.'''
    inputs: list[np.ndarray] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)
    masks: list[np.ndarray] = field(default_factory=list)
    output: np.ndarray | None = None


class Mlp:
    '''Stack of affine -> activation -> inverted dropout layers with exact reverse-mode gradients.

    Dropout acts on each layer's post-activation output; the last layer never drops.
    '''
    def __init__(
        self,
        name: str,
        dims: list[int],
        rng: Rng,
        dropout: float = 0.0,
        final_activation: Activation | str = Activation.ELU,
        dtype=np.float64,
    ):
        if len(dims) < 2:
            raise ValueError(f'{name}: need at least input and output dims, got {dims}')
        check_rate(dropout)
        self.name = name
        self.layers: list[DenseLayer] = []
        num_layers = len(dims) - 1
        for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
            is_last = i == num_layers - 1
            self.layers.append(
                DenseLayer(
                    weight=Param(f'{name}.{i}.W', he_init(fan_in, (fan_in, fan_out), rng, dtype=dtype)),
                    bias=Param(f'{name}.{i}.b', np.zeros(fan_out, dtype=dtype), is_weight=False),
                    activation=Activation(final_activation) if is_last else Activation.ELU,
                    dropout=0.0 if is_last else dropout,
                )
            )

    @property
    def input_dim(self) -> int:
        return self.layers[0].input_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].output_dim

    @property
    def dims(self) -> list[int]:
        return [self.input_dim] + [layer.output_dim for layer in self.layers]

    @property
    def params(self) -> list[Param]:
        return [p for layer in self.layers for p in (layer.weight, layer.bias)]

    def forward(
        self,
        x: np.ndarray,
        training: bool = False,
        rng: Rng | None = None,
        masks: list[np.ndarray] | None = None,
    ) -> tuple[np.ndarray, MlpCache]:
        '''
        Args:
            masks: dropout masks of an earlier call to replay instead of drawing new ones,
                used to freeze the graph for gradient checks.
        '''
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise ShapeMismatchError(f'{self.name}: expected (n, {self.input_dim}) input, got {x.shape}')
        cache = MlpCache()
        h = x
        for i, layer in enumerate(self.layers):
            cache.inputs.append(h)
            pre = h @ layer.weight.value + layer.bias.value
            cache.pre_activations.append(pre)
            h = layer.activate(pre)
            if masks is not None:
                mask = masks[i]
                h = h * mask
            else:
                h, mask = dropout_apply(h, layer.dropout, training, rng)
            cache.masks.append(mask)
        cache.output = h
        return h, cache

    def backward(self, cache: MlpCache, grad_out: np.ndarray) -> np.ndarray:
        '''Accumulates parameter gradients and returns the gradient w.r.t. the input.'''
        g = grad_out
        for i in reversed(range(len(self.layers))):
            layer = self.layers[i]
            g = g * cache.masks[i]
            g = g * layer.activate_grad(cache.pre_activations[i])
            layer.weight.grad += cache.inputs[i].T @ g
            layer.bias.grad += g.sum(axis=0)
            g = g @ layer.weight.value.T
        return g

    def __call__(self, x: np.ndarray) -> np.ndarray:
        out, _ = self.forward(x, training=False)
        return out

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()

    def __repr__(self):
        return f"Mlp({self.name}, dims={'-'.join(map(str, self.dims))})"
