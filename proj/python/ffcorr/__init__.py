from ffcorr._core import *  # noqa: F401,F403
from ffcorr._core import __version__  # noqa: F401
