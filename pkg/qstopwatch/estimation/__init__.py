"""covariant time measurements, estimators and their inaccuracy"""

from .povm import *
from .mle import *
from .fisher import *
from .inaccuracy import *
from .bound_checks import *
