"""Modular interpreted systems: modelling, unfolding, analysis and openness metrics."""
from .interference import BROADCAST, Token, TokenBag
from .model import MIS, Agent, Module, validate
from .unfolding import NCEGS, unfold

__version__ = "0.1.0"

__all__ = ["BROADCAST", "Token", "TokenBag", "MIS", "Agent", "Module", "validate",
           "NCEGS", "unfold", "__version__"]
