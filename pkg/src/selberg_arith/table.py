"""Persistent cache of discriminant records (D, h(D), t1, u1, log eps(D)).

File layout (UTF-8, LF):

    # selberg-arith table v1 cutoff=<x> records=<n> sha256=<hex>
    D,h,t1,u1,log_eps
    5,1,3,1,0.962423650119207
    ...

Rows are sorted by D.  The checksum covers everything after the first line.
``cutoff`` is the norm bound x such that every D with eps(D)^2 < x is present;
records for other D may be stored as well.
"""

from __future__ import annotations

import hashlib
import io
import logging
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from filelock import FileLock

from .errors import CacheCorruptError, DomainError
from .forms import class_numbers
from .pell import as_fraction, fiber_candidates, fundamental_solution, log_epsilon, unit_below

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAGIC = "# selberg-arith table"
COLUMNS = "D,h,t1,u1,log_eps"


@dataclass(frozen=True)
class DiscriminantRecord:
    D: int
    h: int
    t1: int
    u1: int
    log_eps: float

    def __post_init__(self):
        if self.t1 * self.t1 - self.D * self.u1 * self.u1 != 4:
            raise DomainError(f"({self.t1}, {self.u1}) is not a Pell solution for {self.D}")
        if self.h < 1 or not self.log_eps > 0:
            raise DomainError(f"bad record for D={self.D}")

    def row(self) -> str:
        return f"{self.D},{self.h},{self.t1},{self.u1},{self.log_eps:.17g}"


def default_path() -> Path:
    env = os.environ.get("SELBERG_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_DATA_HOME") or os.path.join(os.path.expanduser("~"), ".local", "share")
    return Path(base) / "selberg-arith" / "table.csv"


def make_records(Ds) -> list[DiscriminantRecord]:
    Ds = sorted(set(Ds))
    hs = class_numbers(Ds)
    out = []
    for D in Ds:
        f = fundamental_solution(D)
        out.append(DiscriminantRecord(D, hs[D], f.t, f.u, log_epsilon(f)))
    return out


def discriminants_below(cutoff) -> list[int]:
    """All D with eps(D)^2 < cutoff, found through traces t with eps(t)^2 < cutoff."""
    x = as_fraction(cutoff)
    out = []
    t = 3
    while unit_below(t * t - 2, x):
        for u, D in fiber_candidates(t):
            # (t, u) is the fundamental solution iff no smaller trace solves for D
            if fundamental_solution(D).t == t:
                out.append(D)
        t += 1
    return sorted(out)


class DiscriminantTable:
    """In-memory record store, optionally backed by a cache file."""

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self.records: dict[int, DiscriminantRecord] = {}
        self.cutoff = Fraction(0)
        self.dirty = False
        self.was_corrupt = False

    # -- persistence

    def _body(self) -> str:
        lines = [COLUMNS] + [self.records[D].row() for D in sorted(self.records)]
        return "\n".join(lines) + "\n"

    def checksum(self) -> str:
        return hashlib.sha256(self._body().encode()).hexdigest()

    def render(self) -> str:
        body = self._body()
        digest = hashlib.sha256(body.encode()).hexdigest()
        head = (f"{MAGIC} v{FORMAT_VERSION} cutoff={self.cutoff} "
                f"records={len(self.records)} sha256={digest}\n")
        return head + body

    @classmethod
    def parse(cls, text: str, path=None) -> DiscriminantTable:
        tab = cls(path)
        lines = text.split("\n")
        head = lines[0].split()
        if not lines[0].startswith(MAGIC) or len(head) < 7:
            raise CacheCorruptError("missing table header")
        fields = dict(kv.split("=", 1) for kv in head[4:] if "=" in kv)
        if head[3] != f"v{FORMAT_VERSION}":
            raise CacheCorruptError(f"unsupported table version {head[3]}")
        body = text[len(lines[0]) + 1:]
        if hashlib.sha256(body.encode()).hexdigest() != fields.get("sha256"):
            raise CacheCorruptError("checksum mismatch")
        if lines[1] != COLUMNS:
            raise CacheCorruptError("unexpected column header")
        try:
            tab.cutoff = Fraction(fields["cutoff"])
            for line in lines[2:]:
                if not line:
                    continue
                D, h, t1, u1, le = line.split(",")
                rec = DiscriminantRecord(int(D), int(h), int(t1), int(u1), float(le))
                tab.records[rec.D] = rec
        except (ValueError, KeyError, DomainError) as exc:
            raise CacheCorruptError(f"bad record: {exc}") from exc
        if len(tab.records) != int(fields.get("records", -1)):
            raise CacheCorruptError("record count mismatch")
        return tab

    @classmethod
    def load(cls, path: Path | str | None = None, rebuild: bool = True) -> DiscriminantTable:
        """Read the cache; a corrupt file is rebuilt (with a warning) unless rebuild=False."""
        path = Path(path) if path is not None else default_path()
        if not path.exists():
            return cls(path)
        text = path.read_text(encoding="utf-8")
        try:
            return cls.parse(text, path)
        except CacheCorruptError as exc:
            if not rebuild:
                raise
            msg = f"table cache {path} is corrupt ({exc}); rebuilding"
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            log.warning(msg)
            tab = cls(path)
            tab.was_corrupt = True
            cutoff = _salvage_cutoff(text)
            if cutoff:
                tab.extend_to(cutoff)
            tab.save()
            return tab

    def save(self) -> None:
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        lock = FileLock(str(self.path) + ".lock")
        with lock:
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            with io.open(tmp, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(self.render())
            os.replace(tmp, self.path)
        self.dirty = False

    # -- contents

    def add(self, Ds) -> None:
        missing = [D for D in set(Ds) if D not in self.records]
        if missing:
            for rec in make_records(missing):
                self.records[rec.D] = rec
            self.dirty = True

    def extend_to(self, cutoff) -> None:
        x = as_fraction(cutoff)
        if x <= self.cutoff:
            return
        self.add(discriminants_below(x))
        self.cutoff = x
        self.dirty = True

    def class_numbers(self, Ds) -> dict[int, int]:
        self.add(Ds)
        return {D: self.records[D].h for D in Ds}

    def h(self, D: int) -> int:
        return self.class_numbers([D])[D]

    def __len__(self):
        return len(self.records)


def _salvage_cutoff(text: str):
    first = text.split("\n", 1)[0]
    for kv in first.split():
        if kv.startswith("cutoff="):
            try:
                return Fraction(kv[7:])
            except ValueError:
                return None
    return None


def build_table(cutoff, path: Path | str | None = None) -> DiscriminantTable:
    """Load (or create) the cache at path and extend it to every D with eps(D)^2 < cutoff."""
    tab = DiscriminantTable.load(path)
    tab.extend_to(cutoff)
    if tab.dirty or (tab.path is not None and not tab.path.exists()):
        tab.save()
    return tab
