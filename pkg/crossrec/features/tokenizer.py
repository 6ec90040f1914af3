from __future__ import annotations
from typing import Callable

import re


Tokenizer = Callable[[str], list[str]]

_TOKEN_PATTERN = re.compile(r'\w+', flags=re.UNICODE)


def simple_tokenize(text: str) -> list[str]:
    '''Lowercases and splits on whitespace/punctuation.'''
    return _TOKEN_PATTERN.findall(text.lower())
