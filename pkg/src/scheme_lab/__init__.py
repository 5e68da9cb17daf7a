"""Exact tools for association schemes, their feasibility and their line systems."""

from .errors import SchemeLabError
from .rational import RMatrix
from .scheme import ConcreteScheme, KreinArray, ParameterSet
from .verdict import Report, Verdict

__version__ = "0.1.0"

__all__ = ["ConcreteScheme", "KreinArray", "ParameterSet", "RMatrix", "Report", "SchemeLabError", "Verdict", "__version__"]
