import os
import gzip
import shutil
from logging.handlers import TimedRotatingFileHandler


class CompressedTimedRotatingFileHandler(TimedRotatingFileHandler):
    '''Rotates like TimedRotatingFileHandler and gzips the rotated file, e.g. crossrec.train.log.2026-10-19.gz'''
    def __init__(self, filename, **kwargs):
        super().__init__(filename, **kwargs)
        self.namer = self._gz_namer
        self.rotator = self._gz_rotator

    @staticmethod
    def _gz_namer(default_name: str) -> str:
        return default_name + '.gz'

    @staticmethod
    def _gz_rotator(source: str, dest: str):
        with open(source, 'rb') as f_in, gzip.open(dest, 'wb') as f_out:
            shutil.copyfileobj(f_in, f_out)
        os.remove(source)

    def getFilesToDelete(self):
        # rotated files end with .gz, strip it before matching the date suffix
        dir_name, base_name = os.path.split(self.baseFilename)
        prefix = base_name + '.'
        result = []
        for file_name in os.listdir(dir_name):
            if not file_name.startswith(prefix):
                continue
            suffix = file_name[len(prefix):].removesuffix('.gz')
            if self.extMatch.fullmatch(suffix):
                result.append(os.path.join(dir_name, file_name))
        if len(result) < self.backupCount:
            return []
        result.sort()
        return result[:len(result) - self.backupCount]
