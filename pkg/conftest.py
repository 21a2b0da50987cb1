# conftest.py
import pytest


@pytest.fixture(autouse=True)
def _logs_temporarios(tmp_path, monkeypatch):
    """Log em diretório temporário e sem eco colorido no console."""
    monkeypatch.setenv("ERE_STAB_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("ERE_STAB_LOG_CONSOLE", "0")
    monkeypatch.setenv("ERE_STAB_THREADS", "1")
