"""
Settings for linmap runs
Holds the run configuration and the persistent factorization cache.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from rich.console import Console

from .constants import CACHE_ENV_VAR, CACHE_MIN_VALUE, DEFAULT_CACHE_FILE, DEFAULT_SEED, OUTPUT_FORMATS
from .numthy import FACTOR_MEMO, Factorization, is_valid_factorization

console = Console(stderr=True)


def resolve_cache_path(flag: str | os.PathLike | None = None) -> Path:
    """
    Pick the factor cache file

    Args:
        flag: Value of --cache, if given

    Returns:
        The flag path, else $LINMAP_CACHE, else ./factor-cache.json
    """
    if flag:
        return Path(flag)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.cwd() / DEFAULT_CACHE_FILE


@dataclass
class RunConfig:
    """Everything a CLI invocation depends on."""
    command: str
    q: int | None = None
    n: int | None = None
    n_max: int | None = None
    i_max: int | None = None
    j_max: int | None = None
    output_format: str = 'text'
    cache_path: Path | None = None
    workers: int = 1
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.cache_path is None:
            self.cache_path = resolve_cache_path()


class FactorCache:
    """
    JSON file mapping a decimal integer to its factorization
    [[prime, exponent], ...]. Entries are re-validated on load; the cache
    is an optimization, so IO problems are reported and then ignored.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.entries: dict[int, Factorization] = {}

    def load(self) -> dict[int, Factorization]:
        """Read and validate the file. A missing file is an empty cache."""
        self.entries = {}
        if not self.path.exists():
            return self.entries
        try:
            with open(self.path, 'r') as f:
                raw = json.load(f)
        except (OSError, ValueError) as e:
            console.print(f"[yellow]⚠ Error loading factor cache {self.path}: {e}[/yellow]")
            return self.entries
        if not isinstance(raw, dict):
            console.print(f"[yellow]⚠ Factor cache {self.path} is not a JSON object, ignoring it[/yellow]")
            return self.entries

        dropped = 0
        for key, pairs in raw.items():
            try:
                n = int(key)
                fact = tuple((int(p), int(e)) for p, e in pairs)
            except (TypeError, ValueError):
                dropped += 1
                continue
            if n < 1 or not is_valid_factorization(n, fact):
                dropped += 1
                continue
            self.entries[n] = fact
        if dropped:
            console.print(f"[yellow]⚠ Dropped {dropped} invalid factor cache entr{'y' if dropped == 1 else 'ies'}[/yellow]")
        return self.entries

    def store(self, entries: dict[int, Factorization] | None = None) -> bool:
        """Write atomically: temp file in the same directory, then rename."""
        if entries is not None:
            self.entries = dict(entries)
        payload = {
            str(n): [[str(p), e] for p, e in fact]
            for n, fact in sorted(self.entries.items())
        }
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix='.factor-cache-', suffix='.json', dir=self.path.parent)
            try:
                with os.fdopen(fd, 'w') as f:
                    json.dump(payload, f, indent=1, sort_keys=False)
                os.replace(tmp, self.path)
            except BaseException:
                os.unlink(tmp)
                raise
        except OSError as e:
            console.print(f"[red]❌ Error saving factor cache {self.path}: {e}[/red]")
            return False
        return True

    def warm(self) -> int:
        """Load the file into the process-wide factor memo."""
        entries = self.load()
        FACTOR_MEMO.seed(entries)
        return len(entries)

    def persist(self) -> bool:
        """Merge the factor memo's larger entries into the file."""
        merged = dict(self.entries)
        merged.update({n: f for n, f in FACTOR_MEMO.snapshot().items() if n >= CACHE_MIN_VALUE})
        if merged == self.entries:
            return True
        return self.store(merged)
