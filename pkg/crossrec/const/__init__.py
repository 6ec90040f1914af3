from crossrec.enums import *
from crossrec.const.paths import *
