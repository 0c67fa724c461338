"""Transport-based generative models."""

from .conditional import ConditionalSampler, conditional_sample, stable_invert
from .generator import TransportGenerator, generate, match, sample_fit

__all__ = ["ConditionalSampler", "TransportGenerator", "conditional_sample", "generate",
           "match", "sample_fit", "stable_invert"]
