from pathlib import Path

from django.conf import settings


def table_path(path=None):
    """The curve table to load: an explicit path, else the configured bundled table."""
    return Path(path) if path else Path(settings.CROSSCAP_TABLE_PATH)


def script_path(name_or_path):
    """Resolve a bundled script name (``thm_main``) or a filesystem path."""
    candidate = Path(name_or_path)
    if candidate.suffix or candidate.exists():
        return candidate
    return Path(settings.CROSSCAP_SCRIPT_DIR) / f"{name_or_path}.prf"


def bundled_scripts():
    return sorted(path.stem for path in Path(settings.CROSSCAP_SCRIPT_DIR).glob("*.prf"))
