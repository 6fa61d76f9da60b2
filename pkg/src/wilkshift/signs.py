"""Sign sequences over {+, -}: finite strings or eventually constant infinite ones.

Text form: ``"+-+"`` is finite; a trailing parenthesized symbol repeats
forever, so ``"+-(+)"`` is ``+ - + + + ...``. The Unicode minus is
accepted on input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from itertools import product

PLUS_FOREVER = "plus_forever"
MINUS_FOREVER = "minus_forever"
UNKNOWN = "unknown"
TAILS = (PLUS_FOREVER, MINUS_FOREVER, UNKNOWN)
_TAIL_SYMBOL = {PLUS_FOREVER: "+", MINUS_FOREVER: "-"}
_SYMBOL_TAIL = {"+": PLUS_FOREVER, "-": MINUS_FOREVER}


@total_ordering
@dataclass(frozen=True)
class SignSeq:
    """A sign sequence; ordering is lexicographic with + < -.

    Eventually constant sequences are stored canonically (repeats of the
    tail symbol are stripped from the end of the prefix), so equal
    sequences compare and hash equal. A sequence with an ``unknown`` tail
    is finite; in the order a finite sequence precedes its extensions.
    """

    prefix: str = ""
    tail: str = UNKNOWN

    def __post_init__(self):
        prefix = self.prefix.replace("−", "-")
        if set(prefix) - {"+", "-"}:
            raise ValueError(f"sign sequence symbols must be + or -, got {self.prefix!r}")
        if self.tail not in TAILS:
            raise ValueError(f"unknown tail {self.tail!r}")
        if self.tail != UNKNOWN:
            prefix = prefix.rstrip(_TAIL_SYMBOL[self.tail])
        object.__setattr__(self, "prefix", prefix)

    @classmethod
    def parse(cls, text: str) -> SignSeq:
        text = text.strip().replace("−", "-")
        if text.endswith(")"):
            head, sep, sym = text[:-1].rpartition("(")
            if not sep or sym not in _SYMBOL_TAIL:
                raise ValueError(f"malformed sign sequence {text!r}")
            return cls(head, _SYMBOL_TAIL[sym])
        return cls(text, UNKNOWN)

    @classmethod
    def eventually_plus(cls, prefix: str) -> SignSeq:
        return cls(prefix, PLUS_FOREVER)

    @classmethod
    def alternating(cls, n: int, start: str = "+") -> SignSeq:
        other = "-" if start == "+" else "+"
        return cls("".join(start if k % 2 == 0 else other for k in range(n)))

    @property
    def is_finite(self) -> bool:
        return self.tail == UNKNOWN

    def defined_length(self) -> float:
        return len(self.prefix) if self.is_finite else float("inf")

    def __len__(self):
        if not self.is_finite:
            raise TypeError("infinite sign sequence has no length")
        return len(self.prefix)

    def __getitem__(self, k: int) -> str:
        if k < 0:
            raise IndexError("negative index")
        if k < len(self.prefix):
            return self.prefix[k]
        if self.is_finite:
            raise IndexError(f"index {k} beyond finite sign sequence of length {len(self.prefix)}")
        return _TAIL_SYMBOL[self.tail]

    def take(self, n: int) -> str:
        return "".join(self[k] for k in range(n))

    def shift(self) -> SignSeq:
        """Drop the first symbol."""
        if self.prefix:
            return SignSeq(self.prefix[1:], self.tail)
        if self.is_finite:
            raise IndexError("cannot shift the empty sequence")
        return self

    def first_difference(self, other: SignSeq) -> int | None:
        """Smallest index where both are defined and differ, else None."""
        n = max(len(self.prefix), len(other.prefix)) + 1
        for k in range(n):
            if k >= self.defined_length() or k >= other.defined_length():
                return None
            if self[k] != other[k]:
                return k
        return None

    def distance(self, other: SignSeq) -> float:
        """The metric 2**-n with n the first index of disagreement."""
        k = self.first_difference(other)
        if k is not None:
            return 2.0 ** -k
        if self == other:
            return 0.0
        raise ValueError("sequences agree on every index where both are defined")

    def _key(self, length: int):
        n = min(length, self.defined_length())
        return tuple(0 if self[k] == "+" else 1 for k in range(int(n)))

    def __lt__(self, other: SignSeq) -> bool:
        if not isinstance(other, SignSeq):
            return NotImplemented
        n = max(len(self.prefix), len(other.prefix)) + 1
        a, b = self._key(n), other._key(n)
        if a != b:
            return a < b
        return False

    def __str__(self) -> str:
        if self.is_finite:
            return self.prefix
        return f"{self.prefix}({_TAIL_SYMBOL[self.tail]})"


def all_strings(n: int) -> list[str]:
    """Every length-n string over {+, -} in lexicographic order (+ < -)."""
    return ["".join(t) for t in product("+-", repeat=n)]
