"""Bott-Morse Poisson structures: exact local models, leaf geometry, gluing and cohomology."""
import logging

from .poly import Polynomial, parse_polynomial, format_polynomial
from .multivector import MultiVector, schouten, wedge, is_poisson
from .models import ModelId, LocalModel, catalog, model, flaschka_ratiu

logging.getLogger("bmpoisson").addHandler(logging.NullHandler())

__all__ = [
    "Polynomial",
    "parse_polynomial",
    "format_polynomial",
    "MultiVector",
    "schouten",
    "wedge",
    "is_poisson",
    "ModelId",
    "LocalModel",
    "catalog",
    "model",
    "flaschka_ratiu",
]
