from pathlib import Path

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Enumeration bounds on |G|*|H|
    default_bound: int = 32
    max_bound: int = 64

    # Worker count for enumeration shards (WORKERS)
    workers: int = 4

    # Cap on candidate rows in a cocycle search and on twist assignments per lift
    search_limit: int = 1 << 18

    # Catalog
    catalog_max_order: int = 64

    # Reports
    report_timing: bool = False
    artifacts_dir: str = "artifacts"

    # Logging
    log_level: str = "WARNING"

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "ignore"

    def artifact_path(self, name: str) -> str:
        return str(Path(self.artifacts_dir) / name)


settings = Settings()
