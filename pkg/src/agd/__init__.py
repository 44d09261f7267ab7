"""Exact symbolic checks for Lie algebroid adjustments and their extensions.

Everything lives on a single coordinate patch with rational-function
coefficients; every identity is checked as an exact residual.
"""

from .symexpr import *  # noqa: F401,F403
from .geometry import *  # noqa: F401,F403
from .report import *  # noqa: F401,F403
from .algebroid import *  # noqa: F401,F403
from .connection import *  # noqa: F401,F403
from .adjustment import *  # noqa: F401,F403
from .extension import *  # noqa: F401,F403
from .pullback import *  # noqa: F401,F403
from .dsl import *  # noqa: F401,F403
from .runner import *  # noqa: F401,F403
from .conventions import CONVENTIONS

__version__ = "0.1.0"
