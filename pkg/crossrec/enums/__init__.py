from crossrec.enums.domain import Domain
from crossrec.enums.method import Method
from crossrec.enums.selection_criterion import SelectionCriterion
from crossrec.enums.activation import Activation
