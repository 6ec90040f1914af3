from __future__ import annotations
from typing import Callable, Protocol

from dataclasses import dataclass

import numpy as np

from crossrec.errors import NonDeterministicGraphError
from crossrec.nn.param import Param
from crossrec.nn.rng import Rng


class DifferentiableGraph(Protocol):
    params: list[Param]

    def loss(self, with_grad: bool) -> float:
        '''Evaluates the scalar loss; when `with_grad`, zeroes and refills every Param.grad.'''
        ...


@dataclass
class FunctionGraph:
    '''Adapts a plain `fn(with_grad) -> loss` closure to DifferentiableGraph.'''
    params: list[Param]
    fn: Callable[[bool], float]

    def loss(self, with_grad: bool) -> float:
        if with_grad:
            for p in self.params:
                p.zero_grad()
        return self.fn(with_grad)


@dataclass(frozen=True)
class GradCheckResult:
    name: str
    max_rel_error: float
    worst_param: str
    num_checked: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tolerance


def grad_check(
    graph: DifferentiableGraph,
    eps: float = 1e-6,
    floor: float = 1e-4,
    max_entries_per_param: int | None = None,
    rng: Rng | None = None,
) -> tuple[float, str, int]:
    '''Compares every analytic gradient entry to the central difference (f(θ+eps) - f(θ-eps)) / (2 eps).

    Relative error per entry is |a - n| / max(|a|, |n|, floor). Entries whose analytic and numeric
    gradients are both below `floor` are effectively checked against the absolute bound
    tolerance·floor; pass a smaller `floor` to hold small gradients to a relative check.

    Returns:
        (max_rel_error, name of the worst param, number of entries checked)
    '''
    if not (0.0 < eps <= 1e-2):
        raise ValueError(f'eps must be in (0, 1e-2], got {eps}')
    if floor <= 0.0:
        raise ValueError(f'floor must be positive, got {floor}')
    base_loss = graph.loss(with_grad=True)
    analytic = {id(p): p.grad.copy() for p in graph.params}
    if graph.loss(with_grad=False) != base_loss:
        raise NonDeterministicGraphError('graph returned different losses for identical parameters, freeze dropout masks first')

    max_rel_error, worst_param, num_checked = 0.0, '', 0
    for p in graph.params:
        indices = list(np.ndindex(p.shape))
        if max_entries_per_param is not None and len(indices) > max_entries_per_param:
            rng = rng or Rng(0)
            chosen = rng.generator.choice(len(indices), size=max_entries_per_param, replace=False)
            indices = [indices[i] for i in sorted(chosen)]
        for idx in indices:
            original = p.value[idx]
            p.value[idx] = original + eps
            loss_plus = graph.loss(with_grad=False)
            p.value[idx] = original - eps
            loss_minus = graph.loss(with_grad=False)
            p.value[idx] = original
            numeric = (loss_plus - loss_minus) / (2.0 * eps)
            a = analytic[id(p)][idx]
            rel_error = abs(a - numeric) / max(abs(a), abs(numeric), floor)
            num_checked += 1
            if rel_error > max_rel_error:
                max_rel_error, worst_param = float(rel_error), p.name
    return max_rel_error, worst_param, num_checked
