from .tracker import *
from .memory_tracker import *
from .file_tracker import *
from .tracker_utils import *
