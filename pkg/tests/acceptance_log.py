"""Collects one verdict per acceptance criterion for the terminal summary."""

RESULTS: list[tuple[str, bool, str]] = []


def record(criterion: str, ok: bool, detail: str) -> bool:
    RESULTS.append((criterion, bool(ok), detail))
    print(f"{'PASS' if ok else 'FAIL'} {criterion}: {detail}")
    return bool(ok)
