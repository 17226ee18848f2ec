"""Ground states of the cubic-quintic NLS energy with a trap and their Thomas-Fermi limit."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

import json as _json


def report(states, profile, sigma=1.0, epsilon=0.0):
    """Scaling report and criteria for a sweep, as a dict."""
    return _json.loads(verify_report(states, profile, sigma, epsilon))  # noqa: F405
