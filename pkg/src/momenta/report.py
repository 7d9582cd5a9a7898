"""Analysis-report assembly and JSON serialization.

Reports keep an "exact" section (lattice and group facts, no tolerances) apart
from a "numeric" section (sampled checks with max errors).  Exact scalars are
serialized as strings so that round-tripping a report never corrupts lattice
data.  The only non-deterministic field is the timestamp, isolated in the
header so reports are comparable by stripping it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone

from .cylinder import deck_group_of_reduced_cover, gamma_mu, orbit_descriptor
from .errors import CapabilityError, ConfigError, InputError
from .lattices import LatticeSubgroup
from .verification import CheckReport, check_rng, run_checks

__all__ = ["AnalysisReport", "build_analysis"]

log = logging.getLogger("momenta.report")

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AnalysisReport:
    """Thin wrapper over the report dictionary; serialization is canonical
    (sorted keys, two-space indent) so identical data gives identical bytes."""

    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls(json.loads(text))

    # -- convenience accessors -------------------------------------------

    @property
    def exact(self) -> dict:
        return self.data["exact"]

    @property
    def checks(self) -> list[CheckReport]:
        return [CheckReport.from_dict(d) for d in self.data["numeric"]["checks"]]

    def all_checks_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def without_header(self) -> dict:
        return {k: v for k, v in self.data.items() if k != "header"}


def _exact_vectors(vectors) -> list[list[str]]:
    return [[x.format() for x in v] for v in vectors]


def _orbit_dict(desc) -> dict:
    out = {"kind": desc.kind, "summary": desc.summary(), "validatedSamples": desc.validated_samples}
    if desc.kind == "affineSubspace":
        out["dim"] = int(desc.basis.shape[0])
        out["basis"] = [[float(x) for x in row] for row in desc.basis]
    else:
        out["casimirValue"] = float(desc.casimir_value)
    return out


def _per_mu_entry(sc, index: int, mu, seed: int) -> dict:
    entry: dict = {"mu": [float(x) for x in mu]}
    try:
        desc = orbit_descriptor(sc, mu, rng=check_rng(seed, f"orbit[{index}]"))
        entry["orbit"] = _orbit_dict(desc)
    except CapabilityError as exc:
        entry["orbitNote"] = str(exc)

    if not sc.decomp.closed:
        entry["reductionSuppressed"] = "holonomy closure has a positive-dimensional part"
        return entry

    try:
        g_mu = gamma_mu(sc, mu)
    except CapabilityError as exc:
        # capability gap is a note in the report, not a crash
        entry["gammaMuNote"] = str(exc)
        return entry
    entry["gammaMu"] = {"rank": g_mu.rank, "basis": [list(c) for c in g_mu.columns]}

    gamma_n = sc.gamma_n if sc.gamma_n is not None else LatticeSubgroup.zero(sc.gamma_dim)
    try:
        deck = deck_group_of_reduced_cover(sc, mu, gamma_n)
    except InputError as exc:
        raise ConfigError("gammaN", str(exc)) from exc
    entry["deckInvariants"] = {"freeRank": deck.free_rank, "torsion": list(deck.torsion)}
    entry["deckDescription"] = deck.describe()
    entry["symplectomorphism"] = deck.is_trivial
    entry["reducedCoverRelation"] = (
        "symplectomorphism" if deck.is_trivial else "nontrivial covering"
    )
    return entry


def build_analysis(sc, checks: list[CheckReport] | None = None, timestamp: str | None = None) -> AnalysisReport:
    """Assemble the full report; runs the check suite when none is supplied."""
    if checks is None:
        checks = run_checks(sc)
    seed = sc.config.verify.seed
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat()

    exact = {
        "holonomyGenerators": _exact_vectors(sc.holonomy_generators),
        "holonomyClosed": sc.decomp.closed,
        "closure": {
            "subspaceBasis": _exact_vectors(sc.decomp.subspace_basis),
            "latticeBasis": _exact_vectors(sc.decomp.lattice_basis),
        },
        "gamma0Basis": [list(c) for c in sc.gamma0.columns],
        "coverClassification": sc.cover_descriptor.text,
        "perMu": [
            _per_mu_entry(sc, i, mu, seed) for i, mu in enumerate(sc.mu_list)
        ],
    }
    data = {
        "header": {
            "generatedAt": timestamp,
            "tool": "momenta",
            "schemaVersion": SCHEMA_VERSION,
        },
        "scenario": sc.config.summary(),
        "exact": exact,
        "numeric": {
            "checks": [c.to_dict() for c in checks],
            "allPassed": all(c.passed for c in checks),
        },
    }
    log.info(
        "assembled report: closed=%s, %d checks, allPassed=%s",
        sc.decomp.closed,
        len(checks),
        data["numeric"]["allPassed"],
    )
    return AnalysisReport(data)
