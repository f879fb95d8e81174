"""GCRF structured regression on Kronecker-product networks."""

from ._krongcrf import *  # noqa: F401,F403
from ._krongcrf import __doc__  # noqa: F401
