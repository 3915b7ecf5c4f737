import numpy as np

from expfam import Partition, build_family


def random_family(rng, N, h, integer=True, uniform=False):
    """Random statistics (small integers or 2-decimal Gaussians) and a random
    reference measure."""
    if integer:
        A = rng.integers(-2, 3, size=(h, N)).tolist()
    else:
        A = np.round(rng.standard_normal((h, N)), 2).tolist()
    nu = [1.0] * N if uniform else np.round(rng.uniform(0.2, 2.0, N), 3).tolist()
    return build_family(N, nu, A)


def random_partition(rng, N, n_blocks=None):
    if n_blocks is None:
        n_blocks = int(rng.integers(1, N))
    labels = np.concatenate([np.arange(n_blocks), rng.integers(0, n_blocks, N - n_blocks)])
    rng.shuffle(labels)
    return Partition([np.flatnonzero(labels == b) for b in range(n_blocks)], N)


def random_distribution(rng, N, zeros=0):
    P = rng.dirichlet(np.ones(N))
    if zeros:
        P[rng.choice(N, zeros, replace=False)] = 0.0
        P /= P.sum()
    return P
