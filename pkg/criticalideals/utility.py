import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Iterator, List, Optional, Sequence

logger = logging.getLogger(__name__)


def split_list(target: Sequence, n: int):
    """Split a sequence into evenly sized chunks

    Args:
        target (Sequence): work items
        n (int): chunk size

    Yields:
        Generator[list]: chunks in their original order
    """
    for idx in range(0, len(target), n):
        yield list(target[idx : idx + n])


def read_checkpoint(path: Optional[str]) -> Dict[str, List[str]]:
    """Load a checkpoint file of completed work items

    Each non-empty line starts with a key (a digraph6 string or a Lambda
    triple such as "Lambda(1,1,1)"), optionally followed by
    TAB-separated result columns.

    Args:
        path (str, optional): checkpoint file; missing file means nothing is done yet

    Returns:
        dict: key -> result columns
    """
    done: Dict[str, List[str]] = {}
    if not path or not os.path.exists(path):
        return done
    with open(path, "r", encoding="ascii") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            done[fields[0]] = fields[1:]
    logger.debug(f"Checkpoint {path}: {len(done)} completed entries")
    return done


def append_checkpoint(path: Optional[str], rows: Sequence[Sequence[str]]) -> None:
    """Append completed rows to a checkpoint file

    Args:
        path (str, optional): checkpoint file, nothing is written when None
        rows (Sequence): rows whose first column is the work-item key
    """
    if not path or not rows:
        return
    with open(path, "a", encoding="ascii") as f:
        for row in rows:
            f.write("\t".join(row) + "\n")


def map_chunks(worker: Callable[[List], List], chunks: Sequence[List], jobs: int = 1) -> Iterator[List]:
    """Apply worker to every chunk, in a process pool when jobs > 1

    Results come back in chunk order either way.

    Args:
        worker (Callable): top-level function, picklable for the pool
        chunks (Sequence[List]): work units
        jobs (int, optional): worker processes

    Yields:
        Iterator[List]: worker results
    """
    if jobs <= 1:
        for chunk in chunks:
            yield worker(chunk)
        return
    logger.debug(f"Dispatching {len(chunks)} chunks to {jobs} processes")
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        yield from executor.map(worker, chunks)
