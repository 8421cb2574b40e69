from .bitset import count_bits, iter_indexes, lowest_index, make_bitset
from .parallel import resolve_workers, run_chunks
from .storage import atomic_write_text

__all__ = [
    "atomic_write_text",
    "count_bits",
    "iter_indexes",
    "lowest_index",
    "make_bitset",
    "resolve_workers",
    "run_chunks",
]
