"""Comment-aware line reader shared by the text parsers."""

from pathlib import Path
from typing import Iterator


def data_lines(path: str | Path) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, tokens) for every non-empty line, dropping '#' comments."""
    with open(path, encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            tokens = raw.split("#", 1)[0].split()
            if tokens:
                yield number, tokens
