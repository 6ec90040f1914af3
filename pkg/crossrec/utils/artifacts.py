from __future__ import annotations

import hashlib
from pathlib import Path

from crossrec.const.paths import MANIFEST_FILENAME, OUTPUT_SUBDIRS, RESOLVED_CONFIG_FILENAME


def sha256_file(file_path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(file_path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b''):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(directory: str | Path) -> Path:
    '''Writes "<sha256>  <relative path>" for every file under `directory`, sorted by path.'''
    directory = Path(directory)
    manifest_path = directory / MANIFEST_FILENAME
    lines = []
    for file_path in sorted(p for p in directory.rglob('*') if p.is_file()):
        if file_path.name == MANIFEST_FILENAME:
            continue
        lines.append(f'{sha256_file(file_path)}  {file_path.relative_to(directory).as_posix()}')
    manifest_path.write_text('\n'.join(lines) + ('\n' if lines else ''))
    return manifest_path


def prepare_output_dir(out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    for subdir in OUTPUT_SUBDIRS:
        (out_dir / subdir).mkdir(parents=True, exist_ok=True)
    return out_dir


def echo_config(directory: str | Path, config_dict: dict) -> Path:
    from crossrec.utils.utils import dump_yaml_file
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    file_path = directory / RESOLVED_CONFIG_FILENAME
    dump_yaml_file(file_path, config_dict)
    return file_path
