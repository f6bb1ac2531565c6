"""Cogredient standard forms of symmetric bilinear forms over finite local rings."""

from .localring import (
    RingContext,
    RingElement,
    make_ring,
)

__version__ = "0.1.0"
