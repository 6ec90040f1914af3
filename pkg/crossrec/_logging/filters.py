from logging import Filter

from crossrec.const.paths import MAIN_PATH


class FullPathFilter(Filter):
    '''Defines %(shortpath)s: the record's path relative to site-packages or the repo root'''
    def filter(self, record):
        pathname = record.pathname
        if 'site-packages/' in pathname:
            record.shortpath = pathname.split('site-packages/')[-1]
        elif pathname.startswith(str(MAIN_PATH)):
            record.shortpath = pathname[len(str(MAIN_PATH)):].lstrip('/')
        else:
            record.shortpath = pathname
        return True
