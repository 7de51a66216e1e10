"""HTTP backend shim serving an encoder-decoder code model for loggen."""

from .alignment import AlignmentMap, align_tokens
from .model import MASK_TOKEN, ShimModel
from .server import attach_model, create_app, serve

__version__ = "0.1.0"

__all__ = [
    "AlignmentMap",
    "MASK_TOKEN",
    "ShimModel",
    "align_tokens",
    "attach_model",
    "create_app",
    "serve",
]
