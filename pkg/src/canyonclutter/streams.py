"""Deterministic random-number streams.

Every random quantity in the package flows from a single 64-bit scenario
seed.  Substreams use counter-based Philox generators keyed on
(seed, stream tag), so a value depends only on the seed and its position,
never on how much of the stream someone else consumed.  This makes
generation order-independent: azimuth bins can be drawn in parallel, and
any single bin can be regenerated in isolation.
"""

import numpy as np
from numpy.random import Generator, Philox
from scipy.special import ndtri

# Second key word of the Philox key; keeps substreams disjoint.
PROFILE_TAG = 0x0A21
FLUCT_TAG = 0x0F1C
BIN_TAG = 0x0B17

# One Philox block is four 64-bit words, i.e. four float64 uniforms.
UNIFORMS_PER_BLOCK = 4


def keyed_generator(seed: int, tag: int, skip_blocks: int = 0) -> Generator:
    """Generator for substream `tag` of `seed`, optionally skipping whole blocks."""
    bit_gen = Philox(key=np.array([seed, tag], dtype=np.uint64))
    if skip_blocks:
        bit_gen.advance(skip_blocks)
    return Generator(bit_gen)


def uniform_blocks(seed: int, tag: int, n_blocks: int, first_block: int = 0) -> np.ndarray:
    """Return `n_blocks` x 4 uniforms; row i depends only on (seed, tag, first_block + i)."""
    gen = keyed_generator(seed, tag, skip_blocks=first_block)
    return gen.random(n_blocks * UNIFORMS_PER_BLOCK).reshape(n_blocks, UNIFORMS_PER_BLOCK)


def child_seed(seed: int, tag: int, index: int) -> int:
    """Derive an independent 64-bit seed for one substream."""
    seq = np.random.SeedSequence((int(seed), int(tag), int(index)))
    return int(seq.generate_state(1, np.uint64)[0])


def normal_from_uniform(u: np.ndarray) -> np.ndarray:
    """Inverse-CDF standard normals; keeps the fixed per-draw uniform layout."""
    # Generator.random() can return exactly 0.0; clamp so ndtri stays finite.
    return ndtri(np.maximum(u, 2.0**-53))
