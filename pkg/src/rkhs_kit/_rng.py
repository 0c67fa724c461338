"""Seeded random streams.

Every draw comes from one integer seed. Named sub-streams are independent
Philox counter-based generators keyed by the seed and the stream index, so
adding draws to one stream never shifts another. Normal variates use the
Box-Muller transform of Philox uniforms, which keeps the sampler fixed
across library versions.
"""

import numpy as np

from .exceptions import ValidationError

STREAMS = {"data": 0, "weights": 1, "latent": 2}


def substream(seed, name):
    """``numpy.random.Generator`` on the Philox bit generator for ``name``."""
    if name not in STREAMS:
        raise ValidationError(f"unknown random stream '{name}'")
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValidationError("seed must be an unsigned 64-bit integer")
    ss = np.random.SeedSequence(seed, spawn_key=(STREAMS[name],))
    return np.random.Generator(np.random.Philox(ss))


def next_seed(seed):
    """The seed after ``seed``, wrapping within the unsigned 64-bit range."""
    return (int(seed) + 1) % 2 ** 64


def uniform(gen, shape):
    """Uniform draws in the open interval (0, 1)."""
    # random() is in [0, 1); reflect to (0, 1] and nudge the exact 1 down
    u = 1.0 - gen.random(shape)
    return np.minimum(u, np.nextafter(1.0, 0.0))


def standard_normal(gen, shape):
    """Standard normal draws by Box-Muller, filled in C order.

    Pairs ``(u1, u2)`` of uniforms give ``r cos(2 pi u2)`` and
    ``r sin(2 pi u2)`` with ``r = sqrt(-2 log u1)``.
    """
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    n = int(np.prod(shape))
    m = (n + 1) // 2
    u = uniform(gen, (m, 2))
    r = np.sqrt(-2.0 * np.log(u[:, 0]))
    angle = 2.0 * np.pi * u[:, 1]
    z = np.column_stack([r * np.cos(angle), r * np.sin(angle)]).ravel()
    return z[:n].reshape(shape)


def latent_draws(seed, n, dim, law="normal", stream="latent"):
    """``n`` latent points of dimension ``dim`` from ``law`` ("normal" or "uniform")."""
    gen = substream(seed, stream)
    if law == "normal":
        return standard_normal(gen, (n, dim))
    if law == "uniform":
        return uniform(gen, (n, dim))
    raise ValidationError(f"unknown latent law '{law}'")
