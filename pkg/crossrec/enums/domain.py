from enum import StrEnum


class Domain(StrEnum):
    SOURCE = 'source'
    TARGET = 'target'

    @property
    def label(self) -> int:
        '''Binary domain label d_i used by the discriminator (0 = source).'''
        return 0 if self == Domain.SOURCE else 1
