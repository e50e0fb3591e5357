from collections.abc import Sequence
from datetime import datetime
from enum import StrEnum

from pydantic import BaseModel, ConfigDict

from ulrich_lib.models import Certificate


class OutputFormat(StrEnum):
    JSON = "json"
    TABLE = "table"


class CertificateEnvelope(BaseModel):
    """Batch wrapper; the only place a timestamp may appear."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    generated_at: datetime
    certificates: list[Certificate]


def render_table(certificate: Certificate) -> str:
    failed = len(certificate.failed_checks)
    passed = len(certificate.checks) - failed
    header = f"{certificate.id}: {certificate.status} ({passed}/{len(certificate.checks)} checks)"
    rows = [("check", "expected", "got", "")]
    rows += [(c.name, c.expected, c.got, "ok" if c.passed else "FAIL") for c in certificate.checks]
    rows += [(name, "", value, "witness") for name, value in certificate.witnesses.items()]
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = [header]
    for row in rows:
        cells = [cell.ljust(width) for cell, width in zip(row[:3], widths, strict=True)]
        lines.append("  " + "  ".join([*cells, row[3]]))
    return "\n".join(line.rstrip() for line in lines)


def render_certificates(
    certificates: Sequence[Certificate], output_format: OutputFormat, generated_at: datetime | None = None
) -> str:
    """Everything the CLI prints to stdout; an envelope is produced only when generated_at is given."""
    if generated_at is not None:
        envelope = CertificateEnvelope(generated_at=generated_at, certificates=list(certificates))
        if output_format == OutputFormat.JSON:
            return envelope.model_dump_json()
        blocks = [f"generated at {generated_at.isoformat()}", *(render_table(c) for c in certificates)]
        return "\n\n".join(blocks)
    if output_format == OutputFormat.JSON:
        return "\n".join(certificate.model_dump_json() for certificate in certificates)
    return "\n\n".join(render_table(certificate) for certificate in certificates)
