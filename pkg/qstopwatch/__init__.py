"""simulate compressed quantum stopwatches and the estimation of elapsed time"""

from .exceptions import *
from .spin import *
from .clock import *
from .compression import *
from .estimation import *
from .protocols import *
from .sweeps import *
from .spec import *


__version__ = '0.1.0'
