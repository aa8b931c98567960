"""Collects one pass/fail line per acceptance criterion."""

LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> str:
    line = f"criterion {criterion:<4} {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)
    return line


def sort_key(line: str):
    tag = line.split()[1]
    digits = "".join(ch for ch in tag if ch.isdigit())
    return int(digits), tag
