"""Run reports: the JSON envelope every CLI command emits.

A report collects the command line, content hashes of the inputs, a
status, any certificates produced, and homology payloads.  Finalizing
the report replays every attached certificate; a report may only stay
``Certified`` if all of them replay cleanly.
"""

from __future__ import annotations

import hashlib
import json
import time
from typing import Any, Dict, List, Optional, Tuple, Union

from .certificates import ReductionCertificate
from .complexes import SimplicialComplex
from .errors import ReplayError, ValidationError
from .poset import Poset

STATUSES = ("Certified", "Refuted", "Unknown", "Error")

# Exit codes are part of the command line contract.
EXIT_CODES = {"Certified": 0, "Refuted": 1, "Unknown": 2, "Error": 3}

ReplayTarget = Union[Poset, SimplicialComplex]


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def hash_file(path: str) -> str:
    with open(path, "rb") as fh:
        return content_hash(fh.read())


def hash_json(payload: Any) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return content_hash(text.encode("utf-8"))


class RunReport:
    """Mutable builder for one command run.

    Typical life cycle: create, add inputs and results while the command
    executes, then ``finalize()`` once.  Finalization replays the
    attached certificates and stamps the elapsed time; everything else
    in the JSON output is deterministic for fixed inputs.
    """

    def __init__(self, command: str) -> None:
        self.command = command
        self.status: str = "Unknown"
        self.inputs: Dict[str, str] = {}
        self.detail: Dict[str, Any] = {}
        self.homology: List[Dict[str, Any]] = []
        self._certificates: List[Tuple[str, ReductionCertificate, Optional[ReplayTarget]]] = []
        self._started = time.monotonic()
        self._elapsed: Optional[float] = None
        self._finalized = False

    def add_input(self, name: str, *, path: Optional[str] = None,
                  payload: Any = None) -> None:
        if path is not None:
            self.inputs[name] = hash_file(path)
        else:
            self.inputs[name] = hash_json(payload)

    def set_status(self, status: str) -> None:
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        self.status = status

    def add_certificate(self, label: str, certificate: ReductionCertificate,
                        target: Optional[ReplayTarget] = None) -> None:
        """Attach a certificate, with the object it claims to reduce.

        Without a target the certificate is recorded but cannot be
        replayed, which blocks a Certified status.
        """
        self._certificates.append((label, certificate, target))

    def add_homology(self, label: str, payload: Dict[str, Any]) -> None:
        self.homology.append({"label": label, **payload})

    def _replay_one(self, certificate: ReductionCertificate,
                    target: ReplayTarget) -> None:
        # Import here: reduction pulls in this module's siblings.
        from .reduction import replay_poset_certificate, replay_simplicial_certificate

        if isinstance(target, Poset):
            replay_poset_certificate(target, certificate)
        elif isinstance(target, SimplicialComplex):
            replay_simplicial_certificate(target, certificate)
        else:
            raise ReplayError(f"no replay rule for target type {type(target).__name__}")

    def finalize(self) -> "RunReport":
        """Replay all certificates and stamp timing.  Idempotent."""
        if self._finalized:
            return self
        failures: List[Dict[str, str]] = []
        for label, certificate, target in self._certificates:
            if target is None:
                if certificate.steps:
                    failures.append({"certificate": label, "error": "no replay target attached"})
                continue
            try:
                self._replay_one(certificate, target)
            except (ReplayError, ValidationError, ValueError) as exc:
                failures.append({"certificate": label, "error": str(exc)})
        if failures:
            self.detail["replay_failures"] = failures
            # A broken certificate is a soundness problem, not a mere unknown.
            if self.status == "Certified":
                self.status = "Error"
        self._elapsed = time.monotonic() - self._started
        self._finalized = True
        return self

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json_dict(self) -> Dict[str, Any]:
        if not self._finalized:
            self.finalize()
        certs = [
            {"label": label, "certificate": certificate.to_json_dict()}
            for label, certificate, _ in self._certificates
        ]
        return {
            "command": self.command,
            "inputs": dict(sorted(self.inputs.items())),
            "status": self.status,
            "detail": self.detail,
            "certificates": certs,
            "homology": self.homology,
            "timing": {"elapsed_seconds": round(self._elapsed or 0.0, 6)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"
