"""Branch-aware Bessel/Lommel evaluation, Wright zeros and zero census tools."""

__version__ = "0.1.0"
