"""
환경 변수 기반 런타임 설정
"""

import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from config.constants import DEFAULT_ENUMERATION_BUDGET

load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in {"1", "true", "yes", "on"}


@dataclass(frozen=True)
class Settings:
    """런타임 설정"""

    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    log_level: str = "WARNING"
    certify_steps: bool = True


def load_settings() -> Settings:
    """.env / 환경 변수에서 설정 로드"""
    budget = os.getenv("FAIRDIV_ENUMERATION_BUDGET")
    try:
        enumeration_budget = int(budget) if budget else DEFAULT_ENUMERATION_BUDGET
    except ValueError:
        logging.getLogger(__name__).warning(
            "FAIRDIV_ENUMERATION_BUDGET=%r is not an integer, using default", budget
        )
        enumeration_budget = DEFAULT_ENUMERATION_BUDGET

    return Settings(
        enumeration_budget=enumeration_budget,
        log_level=os.getenv("FAIRDIV_LOG_LEVEL", "WARNING").upper(),
        certify_steps=_env_bool("FAIRDIV_CERTIFY_STEPS", True),
    )


def configure_logging(level: Optional[str] = None):
    """stderr 로깅 설정 (stdout은 JSON 전용)"""
    level_name = (level or load_settings().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
