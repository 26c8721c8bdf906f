"""Error type shared by the whole toolkit.

Every failure carries a stable machine-readable ``code`` plus, where it
makes sense, a minimal ``witness`` (a point, a pair, a triple) that
reproduces the problem in isolation.
"""

from __future__ import annotations

from typing import Any


class CoarseScopeError(Exception):
    def __init__(self, code: str, message: str, witness: Any = None):
        super().__init__(f"{code}: {message}" + (f" (witness: {witness!r})" if witness is not None else ""))
        self.code = code
        self.witness = witness


def require(condition: bool, code: str, message: str, witness: Any = None) -> None:
    if not condition:
        raise CoarseScopeError(code, message, witness)
