"""Model enumeration for the two-variable fragment of first-order logic."""

from fo2enum.engine import CompiledSentence

__all__ = ["CompiledSentence"]
__version__ = "0.1.0"
