import sys
import copy
import logging
from pathlib import Path
from logging.config import DictConfigurator
from logging.handlers import TimedRotatingFileHandler

from crossrec._logging.filters import FullPathFilter
from crossrec._logging.formatter import ColoredFormatter


class PerLoggerDictConfigurator(DictConfigurator):
    '''dictConfig where handlers flagged `per_logger: true` are built once per logger,
    each writing to <log_path>/<logger name>.log.

    Training and evaluation runs log to separate files this way
    (crossrec.log, crossrec.train.log, crossrec.eval.log).
    '''
    def __init__(self, config: dict):
        self._raw_config: dict = config
        config = copy.deepcopy(config)
        config.pop('log_path', None)
        self.per_logger_handlers: set[str] = set()
        for name, handler_config in list(config.get('handlers', {}).items()):
            if handler_config.get('per_logger', False):
                self.per_logger_handlers.add(name)
                del config['handlers'][name]
        super().__init__(config)

    def add_handlers(self, logger, handlers):
        for name in handlers:
            try:
                if name in self.per_logger_handlers:
                    handler = self._build_log_file_handler(logger.name, name)
                else:
                    handler = self.config['handlers'][name]
            except Exception as err:
                raise ValueError(f'Unable to add handler {name!r} to logger {logger.name!r}') from err
            self._decorate(handler)
            logger.addHandler(handler)

    @staticmethod
    def _decorate(handler: logging.Handler):
        if handler.name == 'stream_path_handler':
            handler.addFilter(FullPathFilter())
        is_console = isinstance(handler, logging.StreamHandler) and getattr(handler, 'stream', None) in (sys.stdout, sys.stderr)
        if is_console and handler.formatter is not None:
            handler.setFormatter(ColoredFormatter(fmt=handler.formatter._fmt, datefmt=handler.formatter.datefmt))
        if isinstance(handler, TimedRotatingFileHandler) and handler.shouldRollover(None):
            handler.doRollover()

    def _build_log_file_handler(self, logger_name: str, handler_name: str) -> logging.FileHandler:
        handler_config: dict = self._raw_config['handlers'][handler_name]
        formatter_config = self._raw_config['formatters'][handler_config.get('formatter', 'file')]
        file_path = Path(self._raw_config['log_path']) / f'{logger_name}.log'
        handler_cls = self.resolve(handler_config['class'])
        handler = handler_cls(file_path, **handler_config.get('kwargs', {}))
        handler.name = handler_name
        handler.setLevel(handler_config.get('level', 'DEBUG').upper())
        handler.setFormatter(self.configure_formatter(formatter_config))
        return handler
