"""charsieve: exact Dirichlet characters, Selberg weights, and inequality checks."""

__version__ = "0.1.0"
