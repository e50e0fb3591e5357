from opentelemetry import trace
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import (
    SERVICE_NAME as SERVICE_NAME_KEY,
    SERVICE_VERSION as SERVICE_VERSION_KEY,
    Resource,
)
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.trace import SpanKind, Status, StatusCode, Tracer
from opentelemetry.util.types import AttributeValue

from ulrich_lib.models import (
    ATTR_CERTIFICATE_ID,
    ATTR_CERTIFICATE_STATUS,
    ATTR_CHECKS_FAILED,
    ATTR_CHECKS_TOTAL,
    ATTR_FAILED_CHECK_NAMES,
    INSTRUMENTATION_NAME,
    INSTRUMENTATION_VERSION,
    SERVICE_NAME,
    SPAN_PREFIX,
    TRACE_ENDPOINT_PATH,
    Certificate,
)

EXPORT_TIMEOUT_SECONDS = 2


def trace_endpoint(collector_base_url: str, endpoint_code: str) -> str:
    return collector_base_url.rstrip("/") + TRACE_ENDPOINT_PATH.format(endpoint_code)


def setup_tracer(collector_base_url: str, endpoint_code: str) -> Tracer:
    """Install a provider that exports each certificate span as soon as it ends."""
    exporter = OTLPSpanExporter(
        endpoint=trace_endpoint(collector_base_url, endpoint_code), timeout=EXPORT_TIMEOUT_SECONDS
    )
    resource = Resource.create({SERVICE_NAME_KEY: SERVICE_NAME, SERVICE_VERSION_KEY: INSTRUMENTATION_VERSION})
    provider = TracerProvider(resource=resource)
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    trace.set_tracer_provider(provider)
    return trace.get_tracer(INSTRUMENTATION_NAME, INSTRUMENTATION_VERSION)


def certificate_attributes(certificate: Certificate) -> dict[str, AttributeValue]:
    failed = certificate.failed_checks
    attributes: dict[str, AttributeValue] = {
        ATTR_CERTIFICATE_ID: certificate.id,
        ATTR_CERTIFICATE_STATUS: certificate.status.value,
        ATTR_CHECKS_TOTAL: len(certificate.checks),
        ATTR_CHECKS_FAILED: len(failed),
    }
    if failed:
        attributes[ATTR_FAILED_CHECK_NAMES] = [check.name for check in failed]
    return attributes


def send_certificate_span(tracer: Tracer, certificate: Certificate, start_time_ns: int, end_time_ns: int) -> None:
    span = tracer.start_span(
        SPAN_PREFIX + certificate.id,
        kind=SpanKind.INTERNAL,
        attributes=certificate_attributes(certificate),
        start_time=start_time_ns,
    )
    if certificate.status.is_success:
        span.set_status(Status(StatusCode.OK))
    else:
        span.set_status(Status(StatusCode.ERROR, f"certificate {certificate.id} is {certificate.status}"))
    span.end(end_time=end_time_ns)
