import pytest

from campusops.auth import create_account
from campusops.config import Config, FIXTURES_DIR
from campusops.db import Database
from campusops.scheduling import load_area_fixture, load_template_fixture


def make_config(tmp_path, **overrides) -> Config:
    defaults = dict(
        database_path=str(tmp_path / "test.db"),
        media_dir=str(tmp_path / "media"),
        secret_seed="test-seed",
        # light scrypt parameters keep account-heavy tests fast
        scrypt_n=1024,
        sqlite_synchronous="OFF",
    )
    defaults.update(overrides)
    return Config(**defaults)


@pytest.fixture
def cfg(tmp_path):
    return make_config(tmp_path)


@pytest.fixture
def db(cfg):
    database = Database(cfg.database_path, synchronous=cfg.sqlite_synchronous)
    database.init_schema()
    yield database
    database.close()


@pytest.fixture
def areas(db):
    load_area_fixture(db, str(FIXTURES_DIR / "area_types.txt"))


@pytest.fixture
def templates(db, areas):
    load_template_fixture(db, str(FIXTURES_DIR / "schedule_templates.txt"))


@pytest.fixture
def users(db, cfg):
    """One account per role plus extra caretakers; keyed by username."""
    made = {}
    specs = [
        ("admin", "admin", "Admin One"),
        ("inv_mgr", "inventory_manager", "Inventory Manager"),
        ("hk_mgr", "housekeeping_manager", "Housekeeping Manager"),
        ("sup1", "supervisor", "Supervisor One"),
        ("ct1", "caretaker", "Asha Kumari"),
        ("ct2", "caretaker", "Binod Yadav"),
        ("ct3", "caretaker", "Chetan Rao"),
        ("ct4", "caretaker", "Divya Nair"),
        ("ct5", "caretaker", "Eshan Patel"),
    ]
    for username, role, display in specs:
        user_id = create_account(db, cfg, username, f"pw-{username}", role, display)
        made[username] = db.query_one("SELECT * FROM users WHERE id=?", (user_id,))
    return made
