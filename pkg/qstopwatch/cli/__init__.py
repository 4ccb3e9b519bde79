"""command line interface, installed as the qstopwatch script"""

from .cli_run import main
