"""Named symmetric spaces, loaded from the JSON documents in Config.CATALOG_DIR.

The same document schema is accepted by the CLI through --input, so every
file here doubles as a worked example of it.
"""
import json
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import Config
from .errors import InputDocumentError, SymembedError, UnknownSpaceError
from .exact_linalg import int_mat, int_vec
from .root_datum import RootDatum
from .satake import IRootDatum, SatakeData, build_iroot_datum, doubled

logger = logging.getLogger(__name__)

FLAVORS = ("simply_connected", "adjoint")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    flavor: Optional[str]
    description: str
    document: Dict[str, Any]
    path: Optional[Path] = None

    @property
    def doubled_from(self) -> Optional[str]:
        return self.document.get("doubled_from")


def _require(doc: Dict[str, Any], key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise InputDocumentError(f"missing key {key!r} in {where}")
    return doc[key]


def _int_rows(rows, where: str):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputDocumentError(f"{where} must be a list of integer lists")
    try:
        return [int_vec(r) for r in rows]
    except (TypeError, ValueError) as e:
        raise InputDocumentError(f"{where} has a non-integer entry: {e}") from e


def parse_root_datum(doc: Dict[str, Any]) -> RootDatum:
    rd = _require(doc, "root_datum", "document")
    rank_x = _require(rd, "rank", "root_datum")
    if not isinstance(rank_x, int) or rank_x < 0:
        raise InputDocumentError(f"root_datum.rank must be a nonnegative integer, got {rank_x!r}")
    roots = _int_rows(_require(rd, "simple_roots", "root_datum"), "simple_roots")
    coroots = _int_rows(_require(rd, "simple_coroots", "root_datum"), "simple_coroots")
    for name, vs in (("simple_roots", roots), ("simple_coroots", coroots)):
        if any(len(v) != rank_x for v in vs):
            raise InputDocumentError(f"{name} entries must have length {rank_x}")
    datum = RootDatum(rank_x, tuple(roots), tuple(coroots))
    if "cartan" in rd:
        given = _int_rows(rd["cartan"], "cartan")
        if [tuple(r) for r in datum.cartan.tolist()] != given:
            raise InputDocumentError("cartan does not match the pairings of coroots with roots")
    return datum


def parse_satake(doc: Dict[str, Any], rank_x: int) -> SatakeData:
    sat = _require(doc, "satake", "document")
    i_bullet = _require(sat, "I_bullet", "satake")
    tau = _require(sat, "tau", "satake")
    if not all(isinstance(i, int) for i in list(i_bullet) + list(tau)):
        raise InputDocumentError("I_bullet and tau must hold integer labels")
    tau_x = _int_rows(_require(sat, "tau_X", "satake"), "tau_X")
    if len(tau_x) != rank_x or any(len(r) != rank_x for r in tau_x):
        raise InputDocumentError(f"tau_X must be {rank_x}x{rank_x}")
    return SatakeData(frozenset(i_bullet), tuple(tau), int_mat(tau_x, ncols=rank_x))


def load_document(doc: Dict[str, Any]) -> IRootDatum:
    """Build and validate the ı-root datum a document describes."""
    if not isinstance(doc, dict):
        raise InputDocumentError("document must be a JSON object")
    if "doubled_from" in doc:
        return doubled(get(doc["doubled_from"]))
    if doc.get("flavor", FLAVORS[0]) not in FLAVORS:
        raise InputDocumentError(f"unknown lattice flavor {doc['flavor']!r}")
    datum = parse_root_datum(doc)
    satake = parse_satake(doc, datum.rank_x)
    return build_iroot_datum(datum, satake, doc.get("I_circ_prime"))


def load_file(path) -> Dict[str, Any]:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise InputDocumentError(f"{path}: malformed JSON ({e})") from e
    except OSError as e:
        raise InputDocumentError(f"{path}: {e.strerror}") from e


class Catalog:
    """Read-only index over one catalog directory."""

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory or Config.CATALOG_DIR)
        self._lock = threading.Lock()
        self._entries: Optional[Dict[str, CatalogEntry]] = None
        self._built: Dict[str, IRootDatum] = {}

    def entries(self) -> Dict[str, CatalogEntry]:
        with self._lock:
            if self._entries is None:
                self._entries = self._scan()
            return self._entries

    def _scan(self) -> Dict[str, CatalogEntry]:
        out = {}
        if not self.directory.is_dir():
            logger.warning(f"catalog directory {self.directory} does not exist")
            return out
        for path in sorted(self.directory.glob("*.json")):
            doc = load_file(path)
            name = doc.get("name", path.stem)
            if name in out:
                raise InputDocumentError(f"duplicate catalog name {name!r} in {path}")
            out[name] = CatalogEntry(name, doc.get("flavor"), doc.get("description", ""), doc, path)
        logger.debug(f"catalog {self.directory}: {len(out)} entries")
        return out

    def entry(self, name: str) -> CatalogEntry:
        try:
            return self.entries()[name]
        except KeyError:
            raise UnknownSpaceError(name) from None

    def get(self, name: str) -> IRootDatum:
        with self._lock:
            if name in self._built:
                return self._built[name]
        entry = self.entry(name)
        try:
            if entry.doubled_from:
                ird = doubled(self.get(entry.doubled_from))
            else:
                ird = load_document(entry.document)
        except SymembedError:
            logger.warning(f"catalog entry {name} failed validation")
            raise
        with self._lock:
            self._built[name] = ird
        return ird

    def names(self) -> List[str]:
        return sorted(self.entries())


_default = Catalog()


def get(name: str) -> IRootDatum:
    return _default.get(name)


def entry(name: str) -> CatalogEntry:
    return _default.entry(name)


def list_names() -> List[str]:
    return _default.names()
