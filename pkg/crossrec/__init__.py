from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    # need these imports to support IDE hints:
    from crossrec.engines.experiment_engine import ExperimentEngine
    from crossrec.models.dsn import DsnModel
    from crossrec.models.sdae import SdaeModel
    from crossrec.features.vectorizer import FeatureSpace
    from crossrec.run_config import RunConfig

from importlib.metadata import version, PackageNotFoundError

from rich.console import Console

from crossrec.config import get_config, configure


def __getattr__(name: str):
    if name == 'ExperimentEngine':
        from crossrec.engines.experiment_engine import ExperimentEngine
        return ExperimentEngine
    elif name == 'DsnModel':
        from crossrec.models.dsn import DsnModel
        return DsnModel
    elif name == 'SdaeModel':
        from crossrec.models.sdae import SdaeModel
        return SdaeModel
    elif name == 'FeatureSpace':
        from crossrec.features.vectorizer import FeatureSpace
        return FeatureSpace
    elif name == 'RunConfig':
        from crossrec.run_config import RunConfig
        return RunConfig
    raise AttributeError(f"module 'crossrec' has no attribute {name!r}")


print_error = lambda msg: print(f'\033[91m{msg}\033[0m')
print_warning = lambda msg: print(f'\033[93m{msg}\033[0m')
cprint = Console().print


try:
    __version__ = version('crossrec')
except PackageNotFoundError:
    __version__ = '0.0.0'
__all__ = (
    '__version__',
    'configure',
    'get_config',
    'print_error',
    'print_warning',
    'cprint',
    'ExperimentEngine',
    'DsnModel',
    'SdaeModel',
    'FeatureSpace',
    'RunConfig',
)
def __dir__():
    return sorted(__all__)
