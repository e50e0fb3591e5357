from typing import ClassVar


class RecordingNotify:
    """Stands in for notifypy.Notify and keeps every notification that was sent."""

    sent: ClassVar[list["RecordingNotify"]] = []

    def __init__(self) -> None:
        self.title = ""
        self.message = ""
        self.application_name = ""

    def send(self) -> None:
        RecordingNotify.sent.append(self)


class FailingNotify(RecordingNotify):
    def send(self) -> None:
        raise RuntimeError("no notification daemon")
