#!/usr/bin/env python
# ****************************************************************************
# errors.py
#
# DESCRIPTION:
# Exception types raised by dslib. Precondition violations raise one of the
# classes below; verification routines never raise on a failed identity but
# return a report with the failure recorded in it.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************


class DSLError(Exception):
    '''Base class of all dslib errors.'''
    pass


# measures / linear algebra
class NonHermitianWeight(DSLError):
    pass


class NonPSDWeight(DSLError):
    pass


class DimensionMismatch(DSLError):
    pass


class PointOnBoundary(DSLError):
    pass


class BadRadius(DSLError):
    pass


class NotUnitary(DSLError):
    pass


# polynomials / dirichlet
class NonPSDQ(DSLError):
    pass


class GridTooCoarse(DSLError):
    pass


# operators
class SingularTStarT(DSLError):
    pass


class NotLeftInvertible(DSLError):
    pass


class SeriesNotConverged(DSLError):
    pass


class BadRange(DSLError):
    pass


class NotReducing(DSLError):
    pass


class NotUnitaryOnHyperRange(DSLError):
    pass


class TruncationTooShort(DSLError):
    pass


class PreconditionFailed(DSLError):
    pass


# recovery
class NotInvariant(DSLError):
    pass


class NotPositive(DSLError):
    pass


class DiagonalInconsistent(DSLError):
    pass


class InfeasibleSequence(DSLError):
    pass


class IllConditioned(DSLError):
    pass


# I/O
class ParseError(DSLError):
    pass
