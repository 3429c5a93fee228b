"""
Custom exception handling
Every codec error carries a stable error code and a CLI exit code
"""
from typing import Any, Dict, Optional
from pydantic import ValidationError
import json
import logging
import sys
import traceback
import uuid


class DensePointsException(Exception):
    """Base exception for densepoints"""

    def __init__(
        self,
        message: str,
        error_code: str = "DENSEPOINTS_ERROR",
        exit_code: int = 1,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.error_code = error_code
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class InputException(DensePointsException, ValueError):
    """Invalid input values; exit code 2"""

    def __init__(self, message: str, error_code: str = "INPUT_ERROR", **kwargs):
        super().__init__(message=message, error_code=error_code, exit_code=2, **kwargs)


class DegeneratePolygonError(InputException):
    """Polygon with fewer than 3 vertices or zero perimeter"""

    def __init__(self, message: str, vertex_count: int = -1, **kwargs):
        super().__init__(message, error_code="DEGENERATE_POLYGON", **kwargs)
        self.details.update({"vertex_count": vertex_count})


class DimensionError(InputException):
    """Masks or fields with mismatched extents"""

    def __init__(self, message: str, expected: Any = None, actual: Any = None, **kwargs):
        super().__init__(message, error_code="DIMENSION_MISMATCH", **kwargs)
        self.details.update({"expected": expected, "actual": actual})


class EmptyMaskError(InputException):
    """Operation needs at least one foreground pixel"""

    def __init__(self, message: str = "Mask has no foreground pixels", **kwargs):
        super().__init__(message, error_code="EMPTY_MASK", **kwargs)


class MalformedRLEError(InputException):
    """RLE counts do not describe the declared grid"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_code="MALFORMED_RLE", **kwargs)


class EmptyBoundaryError(InputException):
    """Distance transform seeded with no boundary points"""

    def __init__(self, message: str = "Boundary point set is empty", **kwargs):
        super().__init__(message, error_code="EMPTY_BOUNDARY", **kwargs)


class EmptyBandError(InputException):
    """No pixel falls inside the sampling band"""

    def __init__(self, message: str, delta: float = 0.0, **kwargs):
        super().__init__(message, error_code="EMPTY_BAND", **kwargs)
        self.details.update({"delta": delta})


class InvalidCountError(InputException):
    """Point count not allowed by the encoder (e.g. non-square grid count)"""

    def __init__(self, message: str, count: int = -1, **kwargs):
        super().__init__(message, error_code="INVALID_COUNT", **kwargs)
        self.details.update({"count": count})


class InfeasibleCountError(InputException):
    """More points requested than candidate pixels exist"""

    def __init__(self, message: str, count: int = -1, available: int = -1, **kwargs):
        super().__init__(message, error_code="INFEASIBLE_COUNT", **kwargs)
        self.details.update({"count": count, "available": available})


class OutOfBoundsError(InputException):
    """Point outside the grid or box it is evaluated against"""

    def __init__(self, message: str, index: int = -1, **kwargs):
        super().__init__(message, error_code="OUT_OF_BOUNDS", **kwargs)
        self.details.update({"index": index})


class CardinalityError(InputException):
    """Point sets or label vectors with incompatible sizes"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_code="CARDINALITY_MISMATCH", **kwargs)


class DegenerateInputError(InputException):
    """Fewer than 3 distinct points, or all points collinear"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_code="DEGENERATE_INPUT", **kwargs)


class InsufficientPointsError(InputException):
    """Fewer than 3 points above the score threshold"""

    def __init__(self, message: str, available: int = -1, **kwargs):
        super().__init__(message, error_code="INSUFFICIENT_POINTS", **kwargs)
        self.details.update({"available": available})


class LayoutError(InputException):
    """Point set is not the lattice produced by grid sampling"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_code="LAYOUT_ERROR", **kwargs)


class ConfigurationError(InputException):
    """Invalid configuration value or unknown profile"""

    def __init__(self, message: str, field: str = "unknown", **kwargs):
        super().__init__(message, error_code="CONFIGURATION_ERROR", **kwargs)
        self.details.update({"field": field})


class AnnotationParseError(InputException):
    """Annotation file is not valid JSON"""

    def __init__(self, message: str, offset: int = -1, **kwargs):
        super().__init__(message, error_code="ANNOTATION_PARSE_ERROR", **kwargs)
        self.offset = offset
        self.details.update({"offset": offset})


class AnnotationSchemaError(InputException):
    """Annotation file is valid JSON but violates the COCO layout"""

    def __init__(self, message: str, reference: Any = None, **kwargs):
        super().__init__(message, error_code="ANNOTATION_SCHEMA_ERROR", **kwargs)
        self.details.update({"reference": reference})


class ExceptionHandler:
    """Centralized exception handling at the CLI boundary"""

    def __init__(self, debug: bool = False, stream=None):
        self.logger = logging.getLogger("densepoints.exceptions")
        self.debug = debug
        self.stream = stream

    def handle(self, exc: BaseException) -> int:
        """Log the exception, emit a JSON error document, return the exit code"""
        error_id = str(uuid.uuid4())

        if isinstance(exc, DensePointsException):
            code, message, exit_code = exc.error_code, exc.message, exc.exit_code
            details: Any = exc.details
            self.logger.error(
                f"densepoints exception [{error_id}]: {exc.message}",
                extra={"error_id": error_id, "error_code": code, "details": exc.details}
            )
        elif isinstance(exc, ValidationError):
            code, message, exit_code = "VALIDATION_ERROR", "Validation failed", 2
            details = exc.errors(include_url=False)
            self.logger.warning(
                f"Validation exception [{error_id}]: {str(exc)}",
                extra={"error_id": error_id, "errors": details}
            )
        else:
            code, exit_code = "INTERNAL_ERROR", 1
            message = str(exc) if self.debug else "Internal error"
            details = {}
            self.logger.error(
                f"Unexpected exception [{error_id}]: {str(exc)}",
                extra={
                    "error_id": error_id,
                    "traceback": traceback.format_exc() if self.debug else None
                }
            )

        document = {
            "error": {
                "id": error_id,
                "code": code,
                "message": message,
                "details": details if self.debug else {}
            }
        }
        stream = self.stream or sys.stderr
        stream.write(json.dumps(document, default=str) + "\n")
        return exit_code
