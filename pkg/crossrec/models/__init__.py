from crossrec.models.model_config import SdaeConfig, DsnConfig, LossWeights
from crossrec.models.model_base import BaseNetwork
from crossrec.models.sdae import SdaeModel, corrupt, sdae_apply, train_sdae
from crossrec.models.dsn import (
    DsnModel,
    Batch,
    dsn_forward,
    difference_loss,
    similarity_loss,
    item_anchor_loss,
    total_loss,
    init_unseen_from_sdae,
)
