from crossrec.nn.rng import Rng
from crossrec.nn.param import Param
from crossrec.nn.mlp import Mlp, MlpCache, DenseLayer
from crossrec.nn.optim import Adam, adam_step
from crossrec.nn.gradcheck import grad_check, FunctionGraph, GradCheckResult
