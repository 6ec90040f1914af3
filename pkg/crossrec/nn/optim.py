from __future__ import annotations

import numpy as np

from crossrec.nn.param import Param


BETA1 = 0.9
BETA2 = 0.999
EPS = 1e-8
DEFAULT_LR = 1e-3


def adam_step(p: Param, t: int, lr: float = DEFAULT_LR, beta1: float = BETA1, beta2: float = BETA2, eps: float = EPS) -> Param:
    '''One Adam update of `p` in place from `p.grad`, with bias correction for step `t` (1-based).'''
    assert t >= 1, f'{t=} must be >= 1'
    g = p.grad
    p.adam_m *= beta1
    p.adam_m += (1.0 - beta1) * g
    p.adam_v *= beta2
    p.adam_v += (1.0 - beta2) * g * g
    m_hat = p.adam_m / (1.0 - beta1 ** t)
    v_hat = p.adam_v / (1.0 - beta2 ** t)
    p.value -= lr * m_hat / (np.sqrt(v_hat) + eps)
    return p


class Adam:
    def __init__(self, params: list[Param], lr: float = DEFAULT_LR, beta1: float = BETA1, beta2: float = BETA2, eps: float = EPS):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0

    def step(self):
        self.t += 1
        for p in self.params:
            adam_step(p, self.t, lr=self.lr, beta1=self.beta1, beta2=self.beta2, eps=self.eps)

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()
