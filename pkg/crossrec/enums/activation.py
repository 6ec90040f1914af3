from enum import StrEnum


class Activation(StrEnum):
    ELU = 'ELU'
    IDENTITY = 'IDENTITY'
