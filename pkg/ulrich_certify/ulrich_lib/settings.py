import os
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from ulrich_lib.models import ULRICH_CERTIFY_DIR

ENV_FILE_NAME = ".env"
PROJECT_DIR_VARIABLE = "ULRICH_PROJECT_DIR"
REPOSITORY_ENV_FILE = ULRICH_CERTIFY_DIR / ENV_FILE_NAME


def env_file_chain(project_dir: str | None) -> tuple[Path, ...]:
    """.env files in increasing priority: the repository's, then one per directory from / down to project_dir."""
    if project_dir is None:
        return (REPOSITORY_ENV_FILE,)
    project = Path(project_dir).resolve()
    directories = [*reversed(project.parents), project]
    return (REPOSITORY_ENV_FILE, *(directory / ENV_FILE_NAME for directory in directories))


class CertifySettings(BaseSettings):
    """Enumeration bounds and run options; command-line flags take precedence over these."""

    model_config = SettingsConfigDict(
        env_prefix="ULRICH_",
        env_file=env_file_chain(os.environ.get(PROJECT_DIR_VARIABLE)),
        extra="ignore",
    )

    # The four-square scan must reach past a = 9 to mean anything.
    amax: int = Field(default=64, ge=9)
    extended_amax: int = Field(default=256, ge=9)
    max_c: int = Field(default=20, ge=1)
    max_odd_k: int = Field(default=21, ge=3)
    grado_d_max: int = Field(default=8, ge=4)
    jobs: int = Field(default=1, ge=1)
    log_file: str = Field(default="ulrich_certify.log")
    log_level: str = Field(default="INFO")
    collector_base_url: str | None = None
    endpoint_code: str | None = None
    notify_on_finish: bool = Field(default=False)
