"""Collector for the per-criterion acceptance verdict lines; the conftest
terminal-summary hook prints them after the run regardless of capture."""

LINES: list[str] = []


def record(line: str) -> None:
    LINES.append(line)
    print(line)  # also visible live under -s
