#!/usr/bin/env python3
"""
Exception hierarchy for dynkin-walk
Library code raises these; only the CLI turns them into exit codes
"""

from typing import Optional, Tuple


class DynkinWalkError(Exception):
    """Base class for every error raised by the library"""


class InvalidParameterError(DynkinWalkError):
    """A scalar parameter is outside its admissible range"""


class DimensionError(DynkinWalkError):
    """Matrix or vector shapes do not fit the operation"""


class NotEquitableError(DynkinWalkError):
    """A partition fails the equitability test for some pair of cells"""

    def __init__(self, cells: Tuple[int, int], message: Optional[str] = None):
        self.cells = cells
        i, j = cells
        super().__init__(message or f"partition is not equitable: vertices of cell {i} "
                                    f"disagree on their neighbour count in cell {j}")


class Graph6ParseError(DynkinWalkError):
    """Malformed graph6 input; offset is the 0-based byte position of the fault"""

    def __init__(self, offset: int, message: str):
        self.offset = offset
        super().__init__(f"graph6 byte {offset}: {message}")


class TextFormatError(DynkinWalkError):
    """Malformed line-oriented text input; line is 1-based"""

    kind = "text"

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"{self.kind} line {line}: {message}")


class MatrixFormatError(TextFormatError):
    kind = "matrix"


class EdgeListFormatError(TextFormatError):
    kind = "edge list"


class NumericFailureError(DynkinWalkError):
    """A floating point procedure did not converge or produced an inconsistent result"""


class NotApplicableError(DynkinWalkError):
    """The input violates a hypothesis the check relies on"""


class DomainError(DynkinWalkError):
    """A closed form is singular at the requested arguments"""
