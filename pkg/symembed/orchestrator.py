import logging
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

import numpy as np

from . import catalog
from .config import Config
from .embeddings import (
    abelianization, all_pairs, canonical_embedding, cross_check, embedding_report,
    enveloping_monoid, essential_pairs, is_very_flat, minimal_elements, valuation_cone,
)
from .errors import InputDocumentError, SymembedError, UnknownSpaceError, ValidationError
from .monoids import OrbitPoset, SphericalMonoid, down_set, orbit_poset
from .satake import IRootDatum, SphericalLattice, spherical_lattice, t_coefficients

logger = logging.getLogger(__name__)


def jsonable(x):
    """Plain JSON values; rationals become "a/b" strings."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return [jsonable(v) for v in sorted(x)]
    if isinstance(x, np.ndarray):
        return [jsonable(list(row)) for row in x]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


class ComputationOrchestrator:
    """Maps CLI commands to library calls and wraps the outcome.

    Every public method returns {"success": True, "result": ...} or
    {"success": False, "error": ..., "kind": ...}; nothing is computed here
    that the library API does not expose.
    """

    def __init__(self, bound: Optional[int] = None):
        self.bound = Config.DEFAULT_BOUND if bound is None else bound

    def run(self, command: str, document: Optional[Dict[str, Any]] = None,
            space: Optional[str] = None, **options) -> Dict[str, Any]:
        handler = getattr(self, "_" + command.replace("-", "_"), None)
        if handler is None:
            return {"success": False, "error": f"unknown command {command!r}", "kind": "usage"}
        try:
            if command == "list":
                return {"success": True, "result": handler()}
            ird = self._load(document, space)
            result = handler(ird, document or {}, **options)
            payload = {"success": True,
                       "result": jsonable(result.to_dict() if hasattr(result, "to_dict") else result)}
            poset = result if isinstance(result, OrbitPoset) else getattr(result, "orbits", None)
            if isinstance(poset, OrbitPoset):
                payload["dot"] = poset.to_dot()
            return payload
        except ValidationError as e:
            logger.warning(f"validation failed in {command}: {e}")
            return {"success": False, "error": str(e), "kind": "validation", "details": jsonable(e.to_dict())}
        except (InputDocumentError, UnknownSpaceError) as e:
            logger.error(f"bad input for {command}: {e}")
            return {"success": False, "error": str(e), "kind": "input"}
        except SymembedError as e:
            logger.warning(f"{command} rejected: {e}")
            return {"success": False, "error": str(e), "kind": "validation",
                    "details": {"error": str(e), "axiom": type(e).__name__}}
        except Exception as e:
            logger.exception(f"Error in {command}")
            return {"success": False, "error": str(e), "kind": "internal"}

    @staticmethod
    def _load(document, space) -> IRootDatum:
        if (document is None) == (space is None):
            raise InputDocumentError("exactly one of an input document or a space name is required")
        if space is not None:
            return catalog.get(space)
        return catalog.load_document(document)

    @staticmethod
    def _monoid(sl: SphericalLattice, document) -> Optional[SphericalMonoid]:
        entry = document.get("monoid")
        if entry is None:
            return None
        gens = entry.get("generators") if isinstance(entry, dict) else None
        if not isinstance(gens, list):
            raise InputDocumentError("monoid.generators must be a list of integer vectors")
        return SphericalMonoid(sl, gens)

    # ------------------------------------------------------------------
    # commands

    def _list(self):
        return {"spaces": catalog.list_names()}

    def _validate(self, ird, document, **_):
        out = {"axioms": "ok"}
        if "monoid" in document:
            sl = spherical_lattice(ird)
            report = embedding_report(self._monoid(sl, document), self.bound)
            if not report.valid:
                raise ValidationError(f"not an affine embedding: fails {', '.join(report.failed)}",
                                      axiom="affine embedding", failed=report.failed)
            out["embedding"] = report.to_dict()
        return out

    def _spherical_roots(self, ird, document, **_):
        sl = spherical_lattice(ird)
        return {
            "lattice": sl.lattice.basis_vectors,
            "rank": sl.rank,
            "I_circ_prime": sl.i_circ_prime,
            "bar_alpha": sl.bar_alpha,
            "spherical_roots": sl.spherical_roots,
            "spherical_cartan": sl.spherical_cartan,
            "spherical_type": str(sl.spherical_type),
            "t_coefficients": {f"{i},{j}": v for (i, j), v in sorted(t_coefficients(ird).t.items())},
        }

    def _valuation_cone(self, ird, document, **_):
        vc = valuation_cone(spherical_lattice(ird))
        return {"rank": vc.cone.ambient_rank, "dim": vc.cone.dim, "rays": vc.cone.rays,
                "inequalities": vc.cone.inequalities, "bar_alpha_coordinates": vc.normals}

    def _orbits(self, ird, document, enveloping=False, **_):
        sl = spherical_lattice(ird)
        if enveloping:
            L = enveloping_monoid(sl).monoid
        else:
            L = self._monoid(sl, document) or SphericalMonoid.dominant(sl)
        return orbit_poset(L)

    def _canonical(self, ird, document, **_):
        return canonical_embedding(spherical_lattice(ird))

    def _essential_pairs(self, ird, document, **_):
        sl = spherical_lattice(ird)
        pairs = all_pairs(sl)
        return {"rank": len(sl.i_circ_prime), "total": len(pairs),
                "essential": len(essential_pairs(sl)),
                "pairs": [{"J1": p.j1, "J2": p.j2, "essential": p.essential} for p in pairs]}

    def _enveloping(self, ird, document, **_):
        em = enveloping_monoid(spherical_lattice(ird))
        return {"generators": em.generators, "cross_check": cross_check(em).to_dict()}

    def _abelianization(self, ird, document, enveloping=False, **_):
        sl = spherical_lattice(ird)
        if enveloping:
            target = enveloping_monoid(sl)
        else:
            target = self._monoid(sl, document) or SphericalMonoid.dominant(sl)
        ab = abelianization(target)
        return {"L_Z": ab.l_z.generators, "M_0": ab.m_0.basis_vectors,
                "minimal_elements": minimal_elements(ab, self.bound),
                "very_flat": is_very_flat(target, self.bound).to_dict()}

    def _hilbert(self, ird, document, **_):
        sl = spherical_lattice(ird)
        L = self._monoid(sl, document)
        basis = L.hilbert() if L is not None else sl.dominant_hilbert
        return {"hilbert_basis": basis.elements}

    def _down_set(self, ird, document, weight: Sequence[int] = None, **_):
        if weight is None:
            raise InputDocumentError("down-set needs a weight")
        return {"weight": weight, "down_set": down_set(spherical_lattice(ird), tuple(weight))}
