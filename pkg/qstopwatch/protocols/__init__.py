"""end-to-end stopwatch, incoherent, and network protocols"""

from .schedule import *
from .stopwatch import *
from .incoherent import *
from .advantage import *
from .network import *
