"""OEIS search client with a verbatim response cache and offline fixtures.

The client is an optional convenience: nothing else in the library imports
it, and every other feature works with networking disabled.  Raw responses
are cached byte for byte, keyed by the normalised integer prefix; a fixture
directory can serve pre-recorded responses read-only.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import PascalinvError
from .scalars import QuadExt
from .sequences import Seq, prefix

SEARCH_URL = "https://oeis.org/search"
CACHE_ENV = "PASCALINV_OEIS_CACHE"
FIXTURE_ENV = "PASCALINV_OEIS_FIXTURES"
_RETRIES = 3
_BACKOFF_S = 0.5


class NonIntegerSequenceError(PascalinvError):
    """The sequence prefix contains non-integer terms."""


class NetworkError(PascalinvError):
    """The search service could not be reached."""


class CacheMissError(PascalinvError):
    """Offline lookup found nothing in the cache or fixtures."""


@dataclass(frozen=True)
class LookupResult:
    query_prefix: list
    matches: list
    source: str  # "network", "cache" or "fixture"


def _as_int(value) -> int:
    if isinstance(value, QuadExt):
        value = value.to_fraction()
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise NonIntegerSequenceError(f"non-integer term {value}")
        return value.numerator
    if isinstance(value, int):
        return value
    raise NonIntegerSequenceError(f"non-integer term {value!r}")


def integer_prefix(seq: Seq, depth: int) -> list:
    try:
        return [_as_int(t) for t in prefix(seq, depth)]
    except ValueError as exc:  # irrational QuadExt
        raise NonIntegerSequenceError(str(exc)) from exc


def _cache_dir(explicit) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "pascalinv" / "oeis"


def _key(terms) -> str:
    return ",".join(str(t) for t in terms)


def _parse_matches(raw: bytes) -> list:
    obj = json.loads(raw.decode("utf-8"))
    results = obj.get("results") if isinstance(obj, dict) else obj
    matches = []
    for entry in results or []:
        number = entry.get("number")
        ident = f"A{number:06d}" if isinstance(number, int) else str(number)
        matches.append((ident, entry.get("name", "")))
    return matches


def _fetch(query: str) -> bytes:
    import requests

    last = None
    for attempt in range(_RETRIES):
        try:
            resp = requests.get(
                SEARCH_URL, params={"q": query, "fmt": "json"}, timeout=10
            )
            resp.raise_for_status()
            return resp.content
        except Exception as exc:  # noqa: BLE001 - wrap any transport failure
            last = exc
            if attempt + 1 < _RETRIES:
                time.sleep(_BACKOFF_S * 2**attempt)
    raise NetworkError(f"search failed after {_RETRIES} attempts: {last}")


def lookup(
    seq: Seq,
    depth: int,
    offline: bool = False,
    cache_dir=None,
    fixture_dir=None,
) -> LookupResult:
    """Identify an integer sequence prefix against the OEIS search service.

    Cached responses are consulted first, then the read-only fixture
    directory, then (unless ``offline``) the network.  Fresh responses are
    cached verbatim alongside a parsed index.
    """
    terms = integer_prefix(seq, depth)
    key = _key(terms)
    cdir = _cache_dir(cache_dir)
    raw_path = cdir / f"{key}.raw"
    if raw_path.exists():
        return LookupResult(terms, _parse_matches(raw_path.read_bytes()), "cache")

    fdir = fixture_dir if fixture_dir is not None else os.environ.get(FIXTURE_ENV)
    if fdir is not None:
        fix_path = Path(fdir) / f"{key}.raw"
        if fix_path.exists():
            return LookupResult(terms, _parse_matches(fix_path.read_bytes()), "fixture")

    if offline:
        raise CacheMissError(f"no cached response for prefix {key}")

    raw = _fetch(key)
    matches = _parse_matches(raw)  # parse before caching: reject garbage early
    cdir.mkdir(parents=True, exist_ok=True)
    raw_path.write_bytes(raw)
    (cdir / f"{key}.json").write_text(
        json.dumps({"prefix": terms, "matches": matches}, indent=2)
    )
    return LookupResult(terms, matches, "network")
