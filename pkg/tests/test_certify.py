from collections.abc import Callable
from types import FrameType, FunctionType, ModuleType
import inspect
import json
import sys
from typing import Any

from certify import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from pytest import CaptureFixture, MonkeyPatch

from ulrich_lib import curves, diophantine, hilbert, picard, qexact, ulrich_core
from ulrich_lib.settings import CertifySettings


def _settings() -> CertifySettings:
    return CertifySettings(collector_base_url=None, endpoint_code=None, notify_on_finish=False, jobs=1)


def _records(capsys: CaptureFixture[str]) -> list[dict[str, object]]:
    return [json.loads(line) for line in capsys.readouterr().out.splitlines()]


def test_certify_conto(capsys: CaptureFixture[str]) -> None:
    assert main(["certify", "conto"], _settings()) == EXIT_OK

    (record,) = _records(capsys)
    assert record["id"] == "conto"
    assert record["status"] == "verified"


def test_certify_refutation_counts_as_success(capsys: CaptureFixture[str]) -> None:
    assert main(["certify", "nosc4", "hilbert-4d"], _settings()) == EXIT_OK

    records = _records(capsys)
    assert [r["id"] for r in records] == ["nosc4", "hilbert-4d"]
    assert {r["status"] for r in records} == {"refuted-as-expected"}


def test_solve_conto_lists_the_four_classes(capsys: CaptureFixture[str]) -> None:
    assert main(["solve", "conto"], _settings()) == EXIT_OK

    (record,) = _records(capsys)
    witnesses = record["witnesses"]
    assert isinstance(witnesses, dict)
    assert witnesses["count"] == "4"
    assert witnesses["solutions"] == "((6;2,0,0,0), (6;1,1,1,1), (7;3,1,1,0), (9;3,3,3,2))"


def test_check_del_pezzo_quintic_holds(capsys: CaptureFixture[str]) -> None:
    argv = ["check", "--n", "2", "--d", "20", "--g", "6", "--k", "1"]
    argv += ["--KH", "-10", "--K2", "5", "--c2", "7", "--chi", "1"]
    assert main(argv, _settings()) == EXIT_OK

    (record,) = _records(capsys)
    assert record["id"] == "check"
    assert record["status"] == "verified"


def test_check_failing_conditions_exit_nonzero(capsys: CaptureFixture[str]) -> None:
    assert main(["check", "--n", "2", "--d", "20", "--g", "6", "--k", "4"], _settings()) == EXIT_FAILED

    (record,) = _records(capsys)
    assert record["status"] == "mismatch"


def test_check_inconsistent_genus_is_usage_error(capsys: CaptureFixture[str]) -> None:
    argv = ["check", "--n", "2", "--d", "20", "--g", "5", "--k", "1", "--KH", "-10"]
    assert main(argv, _settings()) == EXIT_USAGE
    assert "sectional genus" in capsys.readouterr().err


def test_picard_eff(capsys: CaptureFixture[str]) -> None:
    assert main(["picard", "eff", "(3;1,1,1,1,1,1)"], _settings()) == EXIT_OK

    (record,) = _records(capsys)
    witnesses = record["witnesses"]
    assert isinstance(witnesses, dict)
    assert witnesses["effective"] == "true"
    assert witnesses["h0"] == "4"


def test_picard_eff_malformed_class(capsys: CaptureFixture[str]) -> None:
    assert main(["picard", "eff", "(3;1,x)"], _settings()) == EXIT_USAGE

    captured = capsys.readouterr()
    assert captured.out == ""
    assert "at position 5" in captured.err


def test_list(capsys: CaptureFixture[str]) -> None:
    assert main(["list"], _settings()) == EXIT_OK

    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[0] for line in lines] == [
        "conto",
        "632num",
        "632",
        "k1-surface",
        "hilbert-3d",
        "hilbert-4d",
        "hilbert-4e",
        "noqf4",
        "nosc4",
        "bound",
        "quadric-curves",
        "elliptic-product",
        "grado",
        "surfaces",
        "prop-divisibility",
        "small-k-curves",
        "all",
    ]


def test_table_format(capsys: CaptureFixture[str]) -> None:
    assert main(["certify", "nosc4", "--format", "table"], _settings()) == EXIT_OK

    out = capsys.readouterr().out
    assert out.startswith("nosc4: refuted-as-expected")
    assert "FAIL" not in out


def test_envelope(capsys: CaptureFixture[str]) -> None:
    assert main(["certify", "conto", "--envelope"], _settings()) == EXIT_OK

    document = json.loads(capsys.readouterr().out)
    assert "generated_at" in document
    assert [c["id"] for c in document["certificates"]] == ["conto"]


def test_notification_sent_when_enabled(capsys: CaptureFixture[str], monkeypatch: MonkeyPatch) -> None:
    sent: list[int] = []
    monkeypatch.setattr("certify.send_finished_notification", lambda certificates: sent.append(len(certificates)))
    settings = CertifySettings(collector_base_url=None, endpoint_code=None, notify_on_finish=True, jobs=1)

    assert main(["certify", "conto", "632num"], settings) == EXIT_OK

    assert sent == [2]
    assert len(_records(capsys)) == 2


def test_check_elliptic_curve_with_k_one_fails(capsys: CaptureFixture[str]) -> None:
    assert main(["check", "--n", "1", "--d", "4", "--g", "1", "--k", "1"], _settings()) == EXIT_FAILED

    (record,) = _records(capsys)
    assert record["status"] == "mismatch"


def _public_functions(module: ModuleType) -> dict[str, FunctionType]:
    functions: dict[str, FunctionType] = {}
    for name, value in vars(module).items():
        function = inspect.unwrap(value) if callable(value) else None
        if not name.startswith("_") and isinstance(function, FunctionType) and function.__module__ == module.__name__:
            functions[f"{module.__name__}.{name}"] = function
    return functions


def _record_calls(called: set[Any]) -> Callable[[FrameType, str, Any], None]:
    def profile(frame: FrameType, event: str, _: Any) -> None:
        if event == "call":
            called.add(frame.f_code)

    return profile


def test_certify_all_reaches_every_public_operation(capsys: CaptureFixture[str]) -> None:
    functions: dict[str, FunctionType] = {}
    for module in (qexact, ulrich_core, hilbert, diophantine, picard, curves):
        functions.update(_public_functions(module))
    picard.minus_one_curves.cache_clear()
    settings = CertifySettings(
        collector_base_url=None, endpoint_code=None, notify_on_finish=False, jobs=1, extended_amax=9
    )
    argv = ["certify", "all", "--a-max", "9", "--max-c", "2", "--k-max", "5", "--d-max", "8"]

    called: set[Any] = set()
    sys.setprofile(_record_calls(called))
    try:
        exit_code = main(argv, settings)
    finally:
        sys.setprofile(None)

    assert exit_code == EXIT_OK
    assert len(_records(capsys)) == 16
    assert sorted(name for name, function in functions.items() if function.__code__ not in called) == []
