"""Machine-readable outcome of one verification check."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

PASS = "pass"
FAIL = "fail"
PASS_TRUNCATED = "pass-up-to-truncation"


def _plain(value):
    """Recursively convert to JSON-serializable data, keeping rationals exact."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class Report:
    """Outcome of one named check.

    ``status`` is one of pass / fail / pass-up-to-truncation; a fail always
    carries a witness in ``details``.  Output is deterministic for fixed
    inputs.
    """

    check: str
    params: dict
    status: str
    identity: str = ""
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status in (PASS, PASS_TRUNCATED)

    def to_obj(self) -> dict:
        return {
            "check": self.check,
            "params": _plain(self.params),
            "status": self.status,
            "identity": self.identity,
            "details": _plain(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))


def make_report(check, params, entries, identity="", truncated=False) -> Report:
    """Assemble a Report from (name, ok, witness) triples.

    ``witness`` may be None for passing entries; a truncated computation that
    otherwise passes is reported as pass-up-to-truncation.
    """
    details = []
    all_ok = True
    for name, ok, witness in entries:
        item = {"name": name, "ok": bool(ok)}
        if witness is not None:
            item["witness"] = witness
        details.append(item)
        all_ok = all_ok and ok
    if not all_ok:
        status = FAIL
    elif truncated:
        status = PASS_TRUNCATED
    else:
        status = PASS
    return Report(check=check, params=params, status=status, identity=identity, details=details)
