import logging


class ColoredFormatter(logging.Formatter):
    # ANSI escape codes per level name
    COLORS = {
        'DEBUG': '\033[2m',        # Dim
        'WARNING': '\033[1;93m',   # Bold Yellow
        'ERROR': '\033[1;91m',     # Bold Red
        'CRITICAL': '\033[1;95m',  # Bold Magenta
    }
    RESET = '\033[0m'

    def format(self, record):
        message = super().format(record)
        if color := self.COLORS.get(record.levelname):
            return f'{color}{message}{self.RESET}'
        return message
