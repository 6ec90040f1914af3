from __future__ import annotations
from typing import TYPE_CHECKING, ClassVar
if TYPE_CHECKING:
    from crossrec.nn.param import Param

import logging
from pathlib import Path
from abc import ABC, abstractmethod

import yaml
import numpy as np

from crossrec.errors import SerializationError
from crossrec.utils.utils import dump_yaml_str, short_path


META_KEY = '__meta__'
FORMAT_VERSION = 1


class BaseNetwork(ABC):
    '''A collection of named Params that can be dumped to and loaded from a .npz archive.

    The archive holds one array per param plus a `__meta__` entry, a YAML document with
    the format version, the class name, the constructor arguments and every param shape.
    '''
    _registry: ClassVar[dict[str, type[BaseNetwork]]] = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        BaseNetwork._registry[cls.__name__] = cls

    @property
    @abstractmethod
    def params(self) -> list[Param]:
        pass

    @abstractmethod
    def to_meta(self) -> dict:
        '''Constructor arguments needed to rebuild an identically shaped network'''
        pass

    @classmethod
    @abstractmethod
    def from_meta(cls, meta: dict) -> BaseNetwork:
        pass

    @property
    def num_params(self) -> int:
        return sum(p.value.size for p in self.params)

    @property
    def weights(self) -> list[Param]:
        return [p for p in self.params if p.is_weight]

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()

    def state_dict(self) -> dict[str, np.ndarray]:
        return {p.name: p.value.copy() for p in self.params}

    def load_state_dict(self, state: dict[str, np.ndarray]):
        params = {p.name: p for p in self.params}
        if set(params) != set(state):
            missing, unexpected = set(params) - set(state), set(state) - set(params)
            raise SerializationError(f'{type(self).__name__}: missing params {sorted(missing)}, unexpected params {sorted(unexpected)}')
        for name, value in state.items():
            p = params[name]
            if p.shape != value.shape:
                raise SerializationError(f'{name}: expected shape {p.shape}, got {value.shape}')
            p.value[...] = value

    def dump(self, file_path: str | Path):
        file_path = Path(file_path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        meta = {
            'format_version': FORMAT_VERSION,
            'class': type(self).__name__,
            'config': self.to_meta(),
            'shapes': {p.name: list(p.shape) for p in self.params},
        }
        arrays = self.state_dict()
        arrays[META_KEY] = np.frombuffer(dump_yaml_str(meta).encode('utf-8'), dtype=np.uint8)
        with open(file_path, 'wb') as f:
            np.savez(f, **arrays)
        logging.getLogger('crossrec').debug(f'dumped {type(self).__name__} to {short_path(file_path)}')

    @classmethod
    def load(cls, file_path: str | Path) -> BaseNetwork:
        file_path = Path(file_path)
        if not file_path.is_file():
            raise SerializationError(f'{file_path} does not exist')
        with np.load(file_path, allow_pickle=False) as archive:
            if META_KEY not in archive.files:
                raise SerializationError(f'{file_path} has no {META_KEY} header')
            meta = yaml.safe_load(archive[META_KEY].tobytes().decode('utf-8'))
            state = {name: archive[name] for name in archive.files if name != META_KEY}
        if meta.get('format_version') != FORMAT_VERSION:
            raise SerializationError(f"{file_path}: unsupported format version {meta.get('format_version')}")
        class_name = meta['class']
        target_cls = BaseNetwork._registry.get(class_name)
        if target_cls is None:
            raise SerializationError(f'{file_path}: unknown network class {class_name}')
        if cls is not BaseNetwork and not issubclass(target_cls, cls):
            raise SerializationError(f'{file_path} holds a {class_name}, not a {cls.__name__}')
        for name, shape in meta['shapes'].items():
            if name not in state or list(state[name].shape) != list(shape):
                raise SerializationError(f'{file_path}: param {name} does not match its header shape {shape}')
        network = target_cls.from_meta(meta['config'])
        network.load_state_dict(state)
        logging.getLogger('crossrec').debug(f'loaded {class_name} from {short_path(file_path)}')
        return network
