"""representation theory of qubit ensembles: rotations, Schur weights, blocks"""

from .wigner import *
from .schur import *
from .blocks import *
