from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.sdk.trace.export.in_memory_span_exporter import InMemorySpanExporter
import pytest

from ulrich_lib.certificates import (
    ALL,
    CERTIFICATE_IDS,
    CERTIFICATES,
    CertificateRunner,
    CertificateSpec,
    expand_ids,
)
from ulrich_lib.models import Certificate, CertificateStatus, CertificationLimits

LIMITS = CertificationLimits(amax=64, extended_amax=256, max_c=20, max_odd_k=21, grado_d_max=8)
REFUTATIONS = {"hilbert-3d", "hilbert-4d", "hilbert-4e", "noqf4", "nosc4"}


def _runner() -> tuple[CertificateRunner, InMemorySpanExporter]:
    exporter = InMemorySpanExporter()
    provider = TracerProvider()
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    return CertificateRunner(provider.get_tracer("test"), LIMITS), exporter


@pytest.mark.parametrize("certificate_id", CERTIFICATE_IDS)
def test_every_certificate_replays(certificate_id: str) -> None:
    runner, _ = _runner()
    certificate = runner.run(certificate_id)
    expected = CertificateStatus.REFUTED_AS_EXPECTED if certificate_id in REFUTATIONS else CertificateStatus.VERIFIED
    assert [check.name for check in certificate.failed_checks] == []
    assert certificate.status == expected


def test_certificates_are_deterministic() -> None:
    runner, _ = _runner()
    assert runner.run("nosc4") == runner.run("nosc4")


def test_run_all_keeps_id_order_with_threads() -> None:
    runner, _ = _runner()
    ids = ["surfaces", "noqf4", "632num", "bound"]
    assert [c.id for c in runner.run_all(ids, jobs=4)] == ids


def test_run_emits_one_span_per_certificate() -> None:
    runner, exporter = _runner()
    runner.run_all(["noqf4", "bound"])
    spans = exporter.get_finished_spans()
    assert [span.name for span in spans] == ["ulrich.certify.noqf4", "ulrich.certify.bound"]
    assert spans[0].attributes is not None
    assert spans[0].attributes["ulrich.certificate.status"] == "refuted-as-expected"
    assert spans[0].attributes["ulrich.checks.failed"] == 0


def test_builder_failure_becomes_error_certificate(monkeypatch: pytest.MonkeyPatch) -> None:
    def failing(_: CertificationLimits) -> Certificate:
        raise ArithmeticError("singular system")

    monkeypatch.setitem(CERTIFICATES, "bound", CertificateSpec("bound", "failing", failing))
    runner, exporter = _runner()
    certificate = runner.run("bound")
    assert certificate.status == CertificateStatus.ERROR
    assert certificate.witnesses["error"] == "ArithmeticError: singular system"
    attributes = exporter.get_finished_spans()[0].attributes
    assert attributes is not None
    assert attributes["ulrich.certificate.status"] == "error"


def test_expand_ids() -> None:
    assert expand_ids([ALL]) == list(CERTIFICATE_IDS)
    assert expand_ids(["noqf4", ALL])[0] == "noqf4"
    assert expand_ids(["bound", "bound"]) == ["bound"]
    with pytest.raises(ValueError):
        expand_ids(["nope"])


def test_every_certificate_has_an_anchor() -> None:
    assert all(spec.anchor for spec in CERTIFICATES.values())
    assert len(CERTIFICATE_IDS) == 16
