# -*- coding: utf-8 -*-
"""Exceptions raised by GNSS-QLink.

Exceptions include:

- DomainError - related to values outside the domain of an operation;
- UsageError - related to inconsistent parameters or requests;
- ScenarioError - related to malformed scenario or upgrade plan files;
- DataError - related to unreadable or inconsistent data files.
"""


class GNSSQLinkError(Exception):
    """Base GNSS-QLink exception."""
    pass


class DomainError(GNSSQLinkError, ValueError):
    """Error related to a value outside the domain of an operation."""
    pass


class UsageError(GNSSQLinkError, ValueError):
    """Error related to inconsistent parameters or requests."""
    pass


class ScenarioError(UsageError):
    """Error related to a malformed scenario or upgrade plan file."""

    def __init__(self, key, reason):
        super(ScenarioError, self).__init__(
            "Could not load scenario: key '{0}' {1}.".format(key, reason))
        self.key = key


class DataError(GNSSQLinkError, RuntimeError):
    """Error related to unreadable or inconsistent data files."""
    pass
