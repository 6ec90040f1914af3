from crossrec.training.train_config import TrainConfig
from crossrec.training.candidates import sample_candidates
from crossrec.training.dataset import DomainData, split_train_val
from crossrec.training.trainer import Checkpoint, TrainTrace, train, select_model, grid_search
