import json

import pytest

from campusops import inventory
from campusops.config import FIXTURES_DIR, STATIC_DIR
from campusops.db import Database
from campusops.errors import DomainError
from campusops.harness import measuring, racing, reporting, seeding
from campusops.web import create_app
from tests.conftest import make_config
from tests.server_util import LiveServer

pytestmark = pytest.mark.filterwarnings("ignore::DeprecationWarning")


def test_seed_small_profile_counts(tmp_path):
    cfg = make_config(tmp_path)
    manifest = seeding.seed(cfg, "small")
    counts = manifest["counts"]
    db = Database(cfg.database_path, synchronous="OFF")
    caretakers = db.query_one("SELECT count(*) AS n FROM users WHERE role='caretaker'")["n"]
    assert caretakers == 10
    assert counts["area_types"] == 11
    assert counts["schedule_templates"] == 8
    assert counts["items"] == 50
    assert counts["leave_requests"] == 5
    # 14 days of records, frequencies honored
    dates = db.query("SELECT DISTINCT date FROM daily_records ORDER BY date")
    assert len(dates) == 14
    assert seeding.manifest_path(cfg).is_file()
    db.close()


def test_seed_deterministic_counts(tmp_path):
    first = seeding.seed(make_config(tmp_path / "a"), "small")
    second = seeding.seed(make_config(tmp_path / "b"), "small")
    assert first["counts"] == second["counts"]
    assert first["record_id"] == second["record_id"]
    assert first["measure_date"] == second["measure_date"]


def test_seed_refuses_non_empty_without_force(tmp_path):
    cfg = make_config(tmp_path)
    seeding.seed(cfg, "small")
    with pytest.raises(DomainError) as err:
        seeding.seed(cfg, "small")
    assert err.value.code == "storage-not-empty"
    manifest = seeding.seed(cfg, "small", force=True)
    assert manifest["counts"]["users"] > 0


def test_seed_demo_is_three_x(tmp_path):
    cfg = make_config(tmp_path)
    manifest = seeding.seed(cfg, "demo")
    db = Database(cfg.database_path, synchronous="OFF")
    assert db.query_one("SELECT count(*) AS n FROM users WHERE role='caretaker'")["n"] == 30
    assert manifest["counts"]["schedule_templates"] == 24
    assert manifest["counts"]["items"] == 150
    assert len(db.query("SELECT DISTINCT date FROM daily_records")) == 42
    db.close()


@pytest.fixture(scope="module")
def live(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("harness")
    cfg = make_config(tmp)
    manifest = seeding.seed(cfg, "small")
    app = create_app(cfg)
    with LiveServer(app) as base_url:
        yield base_url, cfg, manifest


def test_measure_runs_and_sample_counts(live, tmp_path):
    base_url, cfg, manifest = live
    ops = measuring.resolve_ops(
        measuring.load_ops(str(FIXTURES_DIR / "measure_ops.txt")), manifest
    )
    assert len(ops) == 4
    assert all("{" not in path for _, path in ops)
    client = measuring.login_client(base_url, "admin", "campus123")
    try:
        runs = measuring.measure(client, ops, samples=3, warmup=1)
    finally:
        client.close()
    assert len(runs) == 8  # 4 ops x 2 modes
    for run in runs:
        assert run.samples == 3
        assert len(run.latency_ms) == 3
        summary = run.summary()
        assert summary["mean_bytes"] == sum(run.payload_bytes) / 3

    out = tmp_path / "samples.txt"
    measuring.write_samples(runs, str(out))
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 24
    assert lines[0].count(",") == 3

    # machine file reload -> byte-identical re-render
    loaded = reporting.load_samples(str(out))
    assert reporting.render_report(loaded) == reporting.render_report(runs)
    table = reporting.render_report(loaded)
    assert "reduction" in table and "task_status_update" in table


def test_payload_counts_exact_body_bytes(live):
    base_url, _, _ = live
    client = measuring.login_client(base_url, "admin", "campus123")
    try:
        response = client.get("/static/app.css", headers={"Accept-Encoding": "identity"})
    finally:
        client.close()
    assert len(response.content) == (STATIC_DIR / "app.css").stat().st_size


def test_login_client_error_paths(live):
    base_url, _, _ = live
    with pytest.raises(DomainError) as err:
        measuring.login_client(base_url, "admin", "wrong-password")
    assert err.value.code == "auth-failure"
    with pytest.raises(DomainError) as err:
        measuring.login_client("http://127.0.0.1:9", "admin", "campus123")
    assert err.value.code == "server-unreachable"


def test_race_over_http(live):
    base_url, cfg, _ = live
    db = Database(cfg.database_path, synchronous="OFF")
    from campusops import auth  # seed actor for direct stock setup

    inv_mgr = db.query_one("SELECT * FROM users WHERE username='inv_mgr'")
    item_id = inventory.create_item(db, "test", "Race test item", "piece")
    inventory.add_stock(db, cfg, item_id, 5, inv_mgr)
    db.close()

    outcome = racing.race(base_url, item_id, concurrency=12, username="inv_mgr", password="campus123")
    assert outcome["attempts"] == 12
    assert outcome["successes"] == 5
    assert outcome["conflicts"] == 7
    assert outcome["other"] == 0
    assert outcome["remaining_quantity"] == 0


def test_cli_seed_and_report(tmp_path, capsys, monkeypatch):
    from campusops import cli

    monkeypatch.setenv("CAMPUSOPS_DB", str(tmp_path / "cli.db"))
    monkeypatch.setenv("MEDIA_DIR", str(tmp_path / "media"))
    monkeypatch.setenv("SCRYPT_N", "1024")
    monkeypatch.setenv("SQLITE_SYNCHRONOUS", "OFF")
    assert cli.main(["seed", "--profile", "small"]) == 0
    out = capsys.readouterr().out
    assert "seeded profile 'small'" in out
    assert "manifest:" in out
    # second run without --force fails cleanly
    assert cli.main(["seed", "--profile", "small"]) == 1
    assert "storage-not-empty" in capsys.readouterr().err

    samples = tmp_path / "samples.txt"
    samples.write_text(
        "op_a,full_page,1000,5.000\nop_a,full_page,1200,6.000\n"
        "op_a,fragment,100,1.000\nop_a,fragment,120,1.200\n"
    )
    assert cli.main(["report", str(samples)]) == 0
    table = capsys.readouterr().out
    assert "90.0%" in table  # 1 - 110/1100


def test_report_single_mode_leaves_reduction_empty(tmp_path):
    samples = tmp_path / "single.txt"
    samples.write_text("op_a,full_page,1000,5.000\nop_a,full_page,1200,6.000\n")
    table = reporting.render_report(reporting.load_samples(str(samples)))
    assert "op_a" in table and "full_page" in table
    assert "%" not in table  # no fragment run, no reduction column value


def test_manifest_resolution(tmp_path):
    manifest = {"measure_date": "2026-03-11", "record_id": 57, "item_id": 3}
    ops = measuring.resolve_ops(
        [("a", "/x/{record}"), ("b", "/y?date={date}&i={item}")], manifest
    )
    assert ops == [("a", "/x/57"), ("b", "/y?date=2026-03-11&i=3")]
