"""Shared plumbing: deterministic JSON, atomic file writes, seed derivation."""

import json
import os
import tempfile

import numpy as np


def canonical_json(payload) -> str:
    """Key-sorted, compact-separator JSON so equal payloads give equal bytes."""
    return json.dumps(payload, sort_keys=True, separators=(",", ": "),
                      indent=1, allow_nan=False)


def atomic_write_text(path, text: str):
    """Write via a temp file and rename, so readers never see partial output."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-",
                                    suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def atomic_write_json(path, payload):
    atomic_write_text(path, canonical_json(payload) + "\n")


def read_json(path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def derive_seed(*parts) -> int:
    """Stable child seed from integer parts, e.g. (base seed, fold index)."""
    sequence = np.random.SeedSequence([int(part) for part in parts])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def fingerprint(paths=(), extra=None) -> str:
    """Content hash over input files plus a JSON-able config section.

    Used to decide whether a persisted pipeline artifact is still valid
    for its inputs.
    """
    import hashlib

    digest = hashlib.blake2b(digest_size=16)
    for path in sorted(os.fspath(p) for p in paths):
        digest.update(os.path.basename(path).encode("utf-8"))
        digest.update(b"\0")
        with open(path, "rb") as handle:
            for chunk in iter(lambda: handle.read(1 << 20), b""):
                digest.update(chunk)
        digest.update(b"\0")
    if extra is not None:
        digest.update(canonical_json(extra).encode("utf-8"))
    return digest.hexdigest()
