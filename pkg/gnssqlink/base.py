# -*- coding: utf-8 -*-
"""Assorted base data structures.

Assorted base data structures provide a generic component of the optical link
and validators shared by the components.
"""

import math

from gnssqlink.constants import EMPTY_NAME
from gnssqlink.exceptions import DomainError


def check_positive(value, name, allow_zero=False):
    """Validate that a parameter is a finite positive number."""
    value = float(value)
    if not math.isfinite(value) or value < 0.0 or \
            (value == 0.0 and not allow_zero):
        raise DomainError("{0} must be {1}, got {2}.".format(
            name, "non-negative" if allow_zero else "positive", value))
    return value


def check_fraction(value, name):
    """Validate that a parameter lies in (0, 1]."""
    value = float(value)
    if not 0.0 < value <= 1.0:
        raise DomainError(
            "{0} must lie in (0, 1], got {1}.".format(name, value))
    return value


class Component(object):
    """Generic component of the optical link."""

    def __init__(self, name=None):
        self._name = name if name else EMPTY_NAME

    def __repr__(self):
        return "<{0} {1}>".format(type(self).__name__, self._name)

    @property
    def name(self):
        """Component name."""
        return self._name if self._name != EMPTY_NAME else None
