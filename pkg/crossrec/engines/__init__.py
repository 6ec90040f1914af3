from crossrec.engines.experiment_engine import ExperimentEngine, PreparedData, prepare_data
