"""frequency-projection compression of clock states into a small memory"""

from .windows import *
from .channel import *
from .error_bounds import *
from .metrics import *
