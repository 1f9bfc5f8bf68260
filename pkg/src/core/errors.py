#!/usr/bin/env python3
"""
Exception hierarchy for wardrop-kit
"""


class WardropKitError(Exception):
    """Base class for every error raised by the library."""


class ConfigurationError(WardropKitError):
    """Invalid solver or sweep configuration."""


class StructuralError(WardropKitError):
    """Dimension mismatch, unknown or colliding ids, oversized compositions."""


class SchemaError(StructuralError):
    """Malformed game or CRG input file."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        location = []
        if line is not None:
            location.append(f"line {line}")
            if column is not None:
                location.append(f"column {column}")
        if path:
            location.append(f"field {path}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class NotStrictlyIncreasingError(StructuralError):
    """Raised by the exact singleton layer when a cost has flat pieces."""

    def __init__(self, resource_ids):
        self.resource_ids = list(resource_ids)
        super().__init__(
            "costs must be strictly increasing for exact water-filling; "
            f"offending resources: {', '.join(self.resource_ids)}"
        )


class ConvergenceError(WardropKitError):
    """The solver ran out of budget; `report` holds the best iterate found."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class RepresentationError(WardropKitError):
    """A comonotone family could not be written as functions of its sum."""

    def __init__(self, resource, samples, message=None):
        self.resource = resource
        self.samples = tuple(samples)
        super().__init__(message or
                         f"resource {resource} is not a nondecreasing function of the "
                         f"aggregate load between samples {self.samples[0]} and {self.samples[1]}")
