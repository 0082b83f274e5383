#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""Exceptions raised by roundlab.

Every error deriving from ValueError is a validation failure (exit code 2 on the command line), SizeCapError is a
refusal to work beyond the desk-scale limits (exit code 3). InconsistencyError also exits with code 2.
"""


class RoundlabError(Exception):
    """Base class of every roundlab error"""


class StructuralError(RoundlabError, ValueError):
    """Input has the wrong shape (non-square matrix, dimension mismatch...)"""


class DomainError(RoundlabError, ValueError):
    """A parameter or an index lies outside the domain of the operation"""


class FormatError(RoundlabError, ValueError):
    """A file could not be parsed. The message carries the file name and line"""


class MetricError(DomainError):
    """The input matrix is not a metric.

    Parameters
    ----------
    message : str
        The error message
    report : MetricReport, optional
        The report listing the violated axioms
    """
    def __init__(self, message, report=None):
        DomainError.__init__(self, message)
        self.report = report


class NotNegativeTypeError(DomainError):
    """A kernel expected to be of negative type is not.

    Parameters
    ----------
    message : str
        The error message
    eigenvalue : float
        The offending (negative) Gram eigenvalue
    """
    def __init__(self, message, eigenvalue):
        DomainError.__init__(self, message)
        self.eigenvalue = float(eigenvalue)


class NotCubicalError(DomainError):
    """The graph is not the 1-skeleton of a CAT(0) cube complex.

    Parameters
    ----------
    message : str
        The error message
    class_id : int
        Index of the edge class that failed the half-space checks
    """
    def __init__(self, message, class_id):
        DomainError.__init__(self, message)
        self.class_id = int(class_id)


class SizeCapError(RoundlabError):
    """The requested object exceeds a size limit"""


class InconsistencyError(RoundlabError):
    """Two independent computations disagree, for instance a violation certificate found below p*"""
