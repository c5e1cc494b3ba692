"""Coset subwords, hat paths and penetration records."""

from dataclasses import dataclass, field

from ..groups.metric import metric_for
from .coned import coset_id


@dataclass(frozen=True)
class Piece:
    start: int              # letter offset in the word
    text: str
    parabolic: int = None   # index of the parabolic, None for a residual letter


@dataclass
class RelativePathDecomposition:
    word: str
    pieces: list = field(default_factory=list)

    @property
    def subwords(self):
        return [p for p in self.pieces if p.parabolic is not None]

    def reassemble(self):
        return "".join(p.text for p in self.pieces)


def _letter_owner(model):
    owner = {}
    for k, h in enumerate(model.parabolics):
        for a in h.letters:
            owner[a] = k
    return owner


def decompose_path(model, word):
    """Split ``word`` into maximal S_H subwords and residual letters.

    The word is scanned from the right; since the S_H are disjoint the
    maximal runs do not depend on the scan direction.
    """
    owner = _letter_owner(model)
    letters = set(model.letters)
    for ch in word:
        if ch not in letters:
            raise ValueError(f"unknown generator {ch!r} for {model.key}")
    pieces = []
    i = len(word)
    while i > 0:
        k = owner.get(word[i - 1])
        if k is None:
            pieces.append(Piece(i - 1, word[i - 1]))
            i -= 1
            continue
        j = i
        while j > 0 and owner.get(word[j - 1]) == k:
            j -= 1
        pieces.append(Piece(j, word[j:i], k))
        i = j
    pieces.reverse()
    return RelativePathDecomposition(word, pieces)


@dataclass(frozen=True)
class PenetrationRecord:
    coset: tuple            # (parabolic index, coset key)
    entry: object
    exit: object
    travel: int             # Cayley-graph distance from entry to exit


@dataclass
class Penetration:
    records: list
    backtracking: bool
    hat_path: list          # vertices and ("cone", k, key) entries
    end: object


def penetration_points(model, word, start=None):
    """Records for each coset subword of the path ``word`` from ``start``."""
    dec = decompose_path(model, word)
    metric = metric_for(model)
    x = model.identity if start is None else start
    hat = [x]
    records = []
    for piece in dec.pieces:
        y = model.evaluate(piece.text, x)
        if piece.parabolic is None:
            hat.append(y)
        else:
            cid = coset_id(model, piece.parabolic, x)
            records.append(PenetrationRecord(cid, x, y, metric.distance(x, y)))
            hat += [("cone",) + cid, y]
        x = y
    return Penetration(records, has_backtracking(records), hat, x)


def has_backtracking(records):
    """True when a coset is penetrated again after being left."""
    seen = set()
    for rec in records:
        if rec.coset in seen:
            return True
        seen.add(rec.coset)
    return False
