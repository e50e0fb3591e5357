from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.sdk.trace.export.in_memory_span_exporter import InMemorySpanExporter
from opentelemetry.trace import StatusCode

from ulrich_lib.models import Certificate, CheckLog
from ulrich_lib.spans import certificate_attributes, send_certificate_span, trace_endpoint


def _certificate(passes: bool) -> Certificate:
    log = CheckLog()
    log.expect("d lower bound", 48, 48)
    log.expect("d upper bound", 24, 24 if passes else 48)
    return log.certificate("nosc4", refutation=True)


def test_certificate_attributes() -> None:
    assert certificate_attributes(_certificate(passes=False)) == {
        "ulrich.certificate.id": "nosc4",
        "ulrich.certificate.status": "mismatch",
        "ulrich.checks.total": 2,
        "ulrich.checks.failed": 1,
        "ulrich.checks.failed_names": ["d upper bound"],
    }


def test_certificate_attributes_omit_failed_names_when_all_pass() -> None:
    assert "ulrich.checks.failed_names" not in certificate_attributes(_certificate(passes=True))


def test_trace_endpoint() -> None:
    assert trace_endpoint("https://collector.example/", "abc") == "https://collector.example/traces/collector/abc/v1/traces"


def test_send_certificate_span() -> None:
    exporter = InMemorySpanExporter()
    provider = TracerProvider()
    provider.add_span_processor(SimpleSpanProcessor(exporter))

    send_certificate_span(provider.get_tracer("test"), _certificate(passes=True), 1_000, 2_000)
    send_certificate_span(provider.get_tracer("test"), _certificate(passes=False), 3_000, 4_000)

    ok, failed = exporter.get_finished_spans()
    assert ok.name == "ulrich.certify.nosc4"
    assert (ok.start_time, ok.end_time) == (1_000, 2_000)
    assert ok.status.status_code == StatusCode.OK
    assert failed.status.status_code == StatusCode.ERROR
    assert failed.attributes is not None
    assert tuple(failed.attributes["ulrich.checks.failed_names"]) == ("d upper bound",)
