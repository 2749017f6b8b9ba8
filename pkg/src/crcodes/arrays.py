"""Intersection arrays ``{b0,...,b_{d-1}; c1,...,c_d}`` and their text/JSON forms."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import ParameterError, ParseError

_ARRAY_RE = re.compile(r"^\{?\s*([\d\s,]+?)\s*;\s*([\d\s,]+?)\s*\}?$")


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.b)
        c = tuple(int(x) for x in self.c)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if not b or len(b) != len(c):
            raise ParameterError(f"b and c must be nonempty and of equal length, got {len(b)} and {len(c)}")
        if any(x <= 0 for x in b + c):
            raise ParameterError("intersection numbers must be positive")
        k = b[0]
        if any(x > k for x in b + c):
            raise ParameterError(f"intersection numbers exceed the degree {k}")
        if any(b[i] + c[i - 1] > k for i in range(1, len(b))):
            raise ParameterError("b_i + c_i exceeds the degree")

    @property
    def diameter(self) -> int:
        return len(self.b)

    @property
    def degree(self) -> int:
        return self.b[0]

    def beta(self, i: int) -> int:
        return self.b[i]

    def gamma(self, i: int) -> int:
        """``c_i`` with the usual 1-based index."""
        return self.c[i - 1]

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"

    def to_json(self) -> dict:
        return {"b": list(self.b), "c": list(self.c)}

    @classmethod
    def parse(cls, text) -> "IntersectionArray":
        """Accept ``"{b0,b1;c1,c2}"``, a JSON object ``{"b": [...], "c": [...]}``,
        or an already-decoded dict."""
        if isinstance(text, IntersectionArray):
            return text
        if isinstance(text, dict):
            try:
                return cls(tuple(text["b"]), tuple(text["c"]))
            except KeyError as exc:
                raise ParseError(f"array object lacks key {exc}") from None
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad array object: {exc}") from None
        s = str(text).strip()
        if s.startswith("{") and '"' in s:
            try:
                return cls.parse(json.loads(s))
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad JSON array: {exc}") from None
        m = _ARRAY_RE.match(s)
        if not m:
            raise ParseError(f"cannot parse intersection array {text!r}")
        try:
            b = [int(x) for x in m.group(1).replace(",", " ").split()]
            c = [int(x) for x in m.group(2).replace(",", " ").split()]
        except ValueError:
            raise ParseError(f"cannot parse intersection array {text!r}") from None
        try:
            return cls(tuple(b), tuple(c))
        except ParameterError as exc:
            raise ParseError(str(exc)) from None
