"""Exhaustive search for generalized Bethe trees with fewer main eigenvalues than levels.

Only the k-by-k divisor is used per instance. Work is split into contiguous
blocks of the lexicographic index range and merged back by index, so the
output does not depend on the number of workers.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import exact, spectra
from .partition import divisor_matrix
from .tree import DegreeSequence, adjacency, build_tree, level_sizes, vertex_count

NUMERIC_RECHECK_CAP = 2000


@dataclass(frozen=True)
class SearchConfig:
    k: int
    max_degree: int
    worker_count: int = 1
    output_path: str | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.max_degree < 2:
            raise ValueError(f"max_degree must be >= 2, got {self.max_degree}")
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be >= 1, got {self.worker_count}")

    @property
    def total(self) -> int:
        return (self.max_degree - 1) ** (self.k - 1)


@dataclass
class SearchHit:
    degrees: DegreeSequence
    main_count: int
    # filled in by the re-verification pass
    reverified: bool | None = None
    numeric_main_count: int | None = None

    @property
    def deficiency(self) -> int:
        return self.degrees.k - self.main_count

    def to_dict(self) -> dict:
        return {
            "degrees": list(self.degrees.degrees),
            "main_count": self.main_count,
            "deficiency": self.deficiency,
            "reverified": self.reverified,
            "numeric_main_count": self.numeric_main_count,
        }


@dataclass
class ScanResult:
    config: SearchConfig
    histogram: dict[int, int]
    hits: list[SearchHit]
    failures: list[dict] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.histogram.values()) + len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures and all(h.reverified is not False for h in self.hits)

    def to_dict(self) -> dict:
        return {
            "k": self.config.k,
            "max_degree": self.config.max_degree,
            "total": self.total,
            "histogram": {str(c): self.histogram[c] for c in sorted(self.histogram)},
            "hits": [h.to_dict() for h in self.hits],
            "failures": self.failures,
        }


def enumerate_degrees(k: int, max_degree: int) -> Iterator[DegreeSequence]:
    """All ``(max_degree - 1)^(k-1)`` sequences with ``2 <= d_i <= max_degree``, lexicographic."""
    for combo in itertools.product(range(2, max_degree + 1), repeat=k - 1):
        yield DegreeSequence(combo)


def _nth_degrees(index: int, k: int, max_degree: int) -> tuple[int, ...]:
    base = max_degree - 1
    digits = []
    for _ in range(k - 1):
        index, r = divmod(index, base)
        digits.append(r + 2)
    return tuple(reversed(digits))


def _scan_block(args: tuple[int, int, int, int]) -> list[tuple[int, int | None, str | None]]:
    k, max_degree, start, stop = args
    out = []
    for index in range(start, stop):
        try:
            ds = DegreeSequence(_nth_degrees(index, k, max_degree))
            out.append((index, exact.main_count_divisor(divisor_matrix(ds)), None))
        except Exception as exc:  # recorded, never aborts the scan
            out.append((index, None, f"{type(exc).__name__}: {exc}"))
    return out


def _blocks(total: int, parts: int) -> list[tuple[int, int]]:
    size, extra = divmod(total, parts)
    bounds, start = [], 0
    for p in range(parts):
        stop = start + size + (1 if p < extra else 0)
        if stop > start:
            bounds.append((start, stop))
        start = stop
    return bounds


def reverify_hit(hit: SearchHit) -> None:
    """Fresh exact elimination, plus the numeric full-tree path when the tree is small."""
    # B^T against the cell sizes: same count as B against e, different elimination
    B = divisor_matrix(hit.degrees)
    again = exact.krylov_rank(B.T.tolist(), level_sizes(hit.degrees))
    hit.reverified = again == hit.main_count
    if vertex_count(hit.degrees) <= NUMERIC_RECHECK_CAP:
        A = adjacency(build_tree(hit.degrees))
        hit.numeric_main_count = spectra.main_spectrum_numeric(A).main_count
        hit.reverified = hit.reverified and hit.numeric_main_count == hit.main_count


def scan(config: SearchConfig, progress: Callable[[int, int], None] | None = None) -> ScanResult:
    """Exact main counts for every sequence; hits are those with ``main_count < k``."""
    total = config.total
    # a few blocks per worker so progress moves; merge order never depends on them
    blocks = _blocks(total, 4 * config.worker_count)
    jobs = [(config.k, config.max_degree, a, b) for a, b in blocks]

    results: list[tuple[int, int | None, str | None]] = []
    done = 0
    if config.worker_count == 1:
        chunks = map(_scan_block, jobs)
        for chunk in chunks:
            results.extend(chunk)
            done += len(chunk)
            if progress:
                progress(done, total)
    else:
        with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
            for chunk in pool.map(_scan_block, jobs):
                results.extend(chunk)
                done += len(chunk)
                if progress:
                    progress(done, total)

    results.sort(key=lambda r: r[0])
    histogram: Counter[int] = Counter()
    hits, failures = [], []
    for index, count, error in results:
        degrees = _nth_degrees(index, config.k, config.max_degree)
        if error is not None:
            failures.append({"index": index, "degrees": list(degrees), "error": error})
            continue
        histogram[count] += 1
        if count < config.k:
            hits.append(SearchHit(DegreeSequence(degrees), count))
    for hit in hits:
        reverify_hit(hit)
    result = ScanResult(config, dict(histogram), hits, failures)
    if config.output_path:
        with open(config.output_path, "w") as fh:
            json.dump(result.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    return result


def scan_k4(max_degree: int, worker_count: int = 1,
            progress: Callable[[int, int], None] | None = None) -> dict:
    """Run the k = 4 scan and label the outcome without asserting anything beyond it."""
    result = scan(SearchConfig(4, max_degree, worker_count), progress)
    report = result.to_dict()
    if result.hits:
        first = result.hits[0].degrees
        report["outcome"] = f"counterexample found: B({first})"
    else:
        report["outcome"] = "consistent with conjecture"
    return report
