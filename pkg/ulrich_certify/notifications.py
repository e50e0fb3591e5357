from collections.abc import Sequence
import logging

from notifypy import Notify  # type: ignore[import-untyped]

from ulrich_lib.models import Certificate

logger = logging.getLogger(__name__)


def finished_summary(certificates: Sequence[Certificate]) -> str:
    failed = [c.id for c in certificates if not c.status.is_success]
    if not failed:
        return f"All {len(certificates)} certificates hold."
    return f"{len(failed)} of {len(certificates)} certificates failed: {', '.join(failed)}."


def send_finished_notification(certificates: Sequence[Certificate]) -> None:
    notification = Notify()
    notification.title = "Certification finished"
    notification.message = finished_summary(certificates)
    notification.application_name = "ulrich-certify"
    try:
        notification.send()
    except Exception:
        # Never affects the exit code.
        logger.exception("Could not send the finished notification")
