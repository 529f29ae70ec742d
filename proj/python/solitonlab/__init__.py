from ._solitonlab import *  # noqa: F401,F403
from ._solitonlab import __doc__  # noqa: F401

__version__ = "0.1.0"
