import typing

if typing.TYPE_CHECKING:
    from .typedefs import *
