"""Shared list of acceptance result lines, printed in the pytest terminal summary."""

LINES: list[str] = []
