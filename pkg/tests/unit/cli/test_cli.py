import pytest
from click.testing import CliRunner

from crossrec.cli.main import crossrec_group


@pytest.fixture
def runner():
    return CliRunner()


def test_unknown_command(runner, user_config):
    result = runner.invoke(crossrec_group, ['fit'], obj={})
    assert result.exit_code == 2


def test_help_lists_the_pipeline(runner, user_config):
    result = runner.invoke(crossrec_group, ['-h'], obj={})
    assert result.exit_code == 0
    for command in ('synth-gen', 'build-vocab', 'train-sdae', 'train', 'evaluate', 'recommend', 'gradcheck', 'config'):
        assert command in result.output


@pytest.mark.smoke
def test_gradcheck_passes(runner, user_config):
    result = runner.invoke(crossrec_group, ['gradcheck', '--seed', '1'], obj={})
    assert result.exit_code == 0, result.output
    assert 'FAILED' not in result.output


def test_config_where(runner, user_config):
    from crossrec.const.paths import CONFIG_PATH
    result = runner.invoke(crossrec_group, ['config', 'where'], obj={})
    assert result.exit_code == 0
    assert str(CONFIG_PATH) in result.output


def test_config_set_needs_an_option(runner, user_config):
    result = runner.invoke(crossrec_group, ['config', 'set'], obj={})
    assert result.exit_code == 2


def test_invalid_override_exits_with_one(runner, user_config, tmp_path):
    result = runner.invoke(crossrec_group, ['synth-gen', '-o', str(tmp_path / 'out'), 'train.epochs=0'], obj={})
    assert result.exit_code == 1
    assert 'ConfigError' in result.output


def test_missing_inputs_are_usage_errors(runner, user_config, tmp_path):
    result = runner.invoke(crossrec_group, ['build-vocab', '-o', str(tmp_path / 'out')], obj={})
    assert result.exit_code == 2
    assert 'synth-gen' in result.output


def test_synth_gen(runner, user_config, tiny_config_file, tmp_path):
    out_dir = tmp_path / 'out'
    result = runner.invoke(crossrec_group, ['synth-gen', '-c', str(tiny_config_file), '-o', str(out_dir)], obj={})
    assert result.exit_code == 0, result.output
    data_dir = out_dir / 'data'
    assert (data_dir / 'MANIFEST').is_file()
    assert (data_dir / 'config.resolved.yml').is_file()
    assert '240 source' in result.output
