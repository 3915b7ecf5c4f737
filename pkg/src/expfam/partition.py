from dataclasses import dataclass

from .errors import InvalidPartition


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of ``range(n_states)`` by nonempty blocks.

    Blocks are stored as sorted tuples, ordered by their smallest element,
    so two partitions compare equal regardless of the input order.
    """

    blocks: tuple

    def __init__(self, blocks, n_states=None):
        blocks = [tuple(sorted(int(x) for x in b)) for b in blocks]
        if any(len(b) == 0 for b in blocks):
            raise InvalidPartition("blocks must be nonempty")
        seen = [x for b in blocks for x in b]
        if len(seen) != len(set(seen)):
            raise InvalidPartition("blocks overlap")
        if n_states is None:
            n_states = len(seen)
        if sorted(seen) != list(range(n_states)):
            raise InvalidPartition(
                f"blocks do not cover the states 0..{n_states - 1}")
        object.__setattr__(self, "blocks", tuple(sorted(blocks)))

    @property
    def n_states(self):
        return sum(len(b) for b in self.blocks)

    @property
    def coarseness(self):
        return max(len(b) for b in self.blocks)

    @property
    def homogeneous(self):
        return len({len(b) for b in self.blocks}) == 1

    def block_of(self, x):
        for b in self.blocks:
            if x in b:
                return b
        raise KeyError(x)

    def labels(self):
        """Block index of every state."""
        out = [0] * self.n_states
        for i, b in enumerate(self.blocks):
            for x in b:
                out[x] = i
        return out

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)
