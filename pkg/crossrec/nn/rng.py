from __future__ import annotations

import numpy as np


class Rng:
    '''Seeded random stream, identical seed => identical draw sequence.

    Sub-streams are derived with `child(*keys)`, so independent consumers
    (dropout, batching, sampling) never share state.
    '''
    def __init__(self, seed: int, *keys: int):
        if seed < 0:
            raise ValueError(f'seed must be non-negative, got {seed}')
        self.seed = int(seed)
        self.keys: tuple[int, ...] = tuple(int(k) for k in keys)
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence([self.seed, *self.keys])))

    def child(self, *keys: int) -> Rng:
        return Rng(self.seed, *self.keys, *keys)

    @property
    def state(self) -> dict:
        return self.generator.bit_generator.state

    def __repr__(self):
        return f'Rng(seed={self.seed}, keys={self.keys})'
