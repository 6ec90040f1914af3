from tests.fixtures.synth_fixture import tiny_synth_config, tiny_task, tiny_run_config, tiny_features, tiny_data
from tests.fixtures.config_fixture import user_config, tiny_config_file
