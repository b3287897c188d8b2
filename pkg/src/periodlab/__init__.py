"""periodlab: exact modular-group algebra and numerics for period functions
of Maass wave forms twisted by finite-dimensional representations."""

__version__ = "0.1.0"
