"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
LINES: list[str] = []


def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {title}"
    if detail:
        line += f" ({detail})"
    LINES.append(line)
    print(line)
    return passed
