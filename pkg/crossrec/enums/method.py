from enum import StrEnum


class Method(StrEnum):
    I_DSN = 'I-DSN'
    DSN = 'DSN'
    NN = 'NN'
    POP = 'POP'

    def needs_model(self) -> bool:
        return self != Method.POP

    def uses_sdae(self) -> bool:
        return self == Method.I_DSN
