"""Verdict records shared by every checking routine."""

import json
from dataclasses import dataclass, field

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


@dataclass(frozen=True)
class Certificate:
    verdict: str
    method: str
    evidence: dict = field(default_factory=dict)
    subject: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self):
        return self.verdict == PASS

    @property
    def failed(self):
        return self.verdict == FAIL

    def to_dict(self):
        return {"verdict": self.verdict, "method": self.method,
                "evidence": self.evidence, "subject": self.subject}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data):
        return cls(data["verdict"], data["method"], data.get("evidence", {}),
                   data.get("subject", {}))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))
