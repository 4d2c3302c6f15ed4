"""
Deterministic artifact file names
"""
from typing import Any, Mapping, Optional


def sanitize_filename(text: str) -> str:
    """Convert text to a valid filename."""
    # '/' appears in rationals such as 1/4
    invalid_chars = '<>:"/\\|?* '
    filename = ''.join(c if c not in invalid_chars else '_' for c in text)
    return filename[:120].strip('. ')


def generate_artifact_filename(command: str, params: Mapping[str, Any], seed: Optional[int] = None,
                               suffix: str = "json") -> str:
    """Name an artifact from its command, its parameters (sorted by name) and its seed."""
    parts = [sanitize_filename(command) or "artifact"]
    for name in sorted(params):
        value = params[name]
        if value is None or name == "seed":
            continue
        parts.append(sanitize_filename(f"{name}-{value}"))
    if seed is not None:
        parts.append(f"seed{seed}")
    return f"{'_'.join(parts)}.{suffix}"
