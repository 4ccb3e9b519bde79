"""orchestration of parameter sweeps"""

from .sweep_class import *
from .studies import *
from .trackers import *
