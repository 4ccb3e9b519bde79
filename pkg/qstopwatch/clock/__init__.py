"""single-qubit and ensemble clock states under dephasing"""

from .params import *
from .qubit import *
from .ensemble import *
