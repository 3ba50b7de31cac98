import numpy as np


def node_generator(seed, node, stream=0) -> np.random.Generator:
    """ Independent Philox stream per (stream, node): results do not depend on scheduling. """
    i, j = node
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, i, j))))


def walker_generator(seed, node, walker, stream=0) -> np.random.Generator:
    i, j = node
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, i, j, walker))))
