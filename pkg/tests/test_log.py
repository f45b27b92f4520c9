from __future__ import annotations

from core.log import RunLogger, TrainingReporter, format_timestamp, set_quiet


def test_prefixes_and_symbols(capsys):
    set_quiet(False)
    log = RunLogger("bal", "esnn")
    log.info("split 1/25")
    log.success("done")
    log.child("split-3").warn("slow")
    err = capsys.readouterr().err.splitlines()
    assert err[0].endswith("[bal] [esnn] split 1/25")
    assert err[1].endswith("[bal] [esnn] ✓ done")
    assert err[2].endswith("[bal] [esnn] [split-3] ⚠ slow")
    assert err[0].startswith("[") and "UTC" in err[0]


def test_quiet_mode_keeps_warnings_and_errors(capsys):
    set_quiet(True)
    log = RunLogger("run")
    log.info("hidden")
    log.success("hidden too")
    log.warn("shown")
    log.error("also shown")
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "hidden" not in captured.err
    assert "⚠ shown" in captured.err and "✗ also shown" in captured.err


def test_timestamp_with_elapsed():
    assert format_timestamp().endswith("UTC]")
    assert "| +" in format_timestamp(start_time=1.0)


def test_training_reporter_interval(capsys):
    set_quiet(False)
    reporter = TrainingReporter(RunLogger("esnn"), total_epochs=5, report_every=2)
    for epoch in range(1, 6):
        reporter.record(epoch, 1.0 / epoch, 0.1 if epoch == 4 else None)
    lines = capsys.readouterr().err.splitlines()
    assert [line.split("epoch ")[1].split("/")[0] for line in lines] == ["2", "4", "5"]
    assert "val_retrieval_loss=0.1000" in lines[1]
    assert reporter.last_val_loss == 0.1
    assert not TrainingReporter(RunLogger(), 5).should_report(5)
