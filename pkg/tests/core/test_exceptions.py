"""
Tests for the exception hierarchy and the CLI exception handler
"""
import io
import json

from pydantic import BaseModel, ValidationError

from core.exceptions.handlers import (
    CardinalityError,
    ConfigurationError,
    DensePointsException,
    ExceptionHandler,
    InfeasibleCountError,
    InputException,
)


class _Model(BaseModel):
    n: int


def handled(exc, debug=False):
    stream = io.StringIO()
    exit_code = ExceptionHandler(debug=debug, stream=stream).handle(exc)
    return exit_code, json.loads(stream.getvalue())


class TestExceptions:
    """Error codes and details"""

    def test_input_errors_are_value_errors(self):
        """Input errors subclass ValueError and exit with 2"""
        error = CardinalityError("3 vs 4")
        assert isinstance(error, InputException)
        assert isinstance(error, ValueError)
        assert error.exit_code == 2
        assert error.error_code == "CARDINALITY_MISMATCH"

    def test_details(self):
        """Keyword arguments land in details"""
        error = InfeasibleCountError("too many", count=30, available=25)
        assert error.details == {"count": 30, "available": 25}


class TestExceptionHandler:
    """JSON error documents and exit codes"""

    def test_input_error(self):
        """Input errors map to exit 2 with code, message and details"""
        exit_code, document = handled(ConfigurationError("bad tau", field="tau"), debug=True)
        assert exit_code == 2
        assert document["error"]["code"] == "CONFIGURATION_ERROR"
        assert document["error"]["message"] == "bad tau"
        assert document["error"]["details"] == {"field": "tau"}

    def test_details_hidden_without_debug(self):
        """Details are omitted unless debug is on"""
        _, document = handled(ConfigurationError("bad tau", field="tau"))
        assert document["error"]["details"] == {}

    def test_runtime_error(self):
        """Library runtime errors exit with 1"""
        exit_code, document = handled(DensePointsException("worker died"))
        assert exit_code == 1
        assert document["error"]["code"] == "DENSEPOINTS_ERROR"

    def test_validation_error(self):
        """Pydantic validation errors count as invalid input"""
        try:
            _Model(n="many")
        except ValidationError as exc:
            exit_code, document = handled(exc)
        assert exit_code == 2
        assert document["error"]["code"] == "VALIDATION_ERROR"

    def test_unexpected_error(self):
        """Unexpected errors hide their message unless debug is on"""
        exit_code, document = handled(RuntimeError("boom"))
        assert exit_code == 1
        assert document["error"]["code"] == "INTERNAL_ERROR"
        assert document["error"]["message"] == "Internal error"
        _, verbose = handled(RuntimeError("boom"), debug=True)
        assert verbose["error"]["message"] == "boom"
