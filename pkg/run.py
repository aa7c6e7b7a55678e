#!/usr/bin/env python3
"""
공정 분할 솔버 실행 스크립트
"""

import os
import sys
from pathlib import Path
from typing import List, Optional


def check_python_version() -> bool:
    """Python 버전 확인"""
    if sys.version_info < (3, 12):
        print("❌ Python 3.12 이상이 필요합니다.", file=sys.stderr)
        print(f"현재 버전: {sys.version}", file=sys.stderr)
        return False
    return True


def check_env_file() -> bool:
    """환경 변수 파일 확인 (없어도 기본값으로 동작)"""
    env_file = Path(".env")

    if not env_file.exists():
        print("ℹ️ .env 파일이 없어 기본 설정을 사용합니다.", file=sys.stderr)
        return False

    try:
        from dotenv import load_dotenv

        load_dotenv(env_file)
    except ImportError:
        print("❌ python-dotenv가 설치되지 않았습니다.", file=sys.stderr)
        print("다음 명령어로 설치하세요: poetry install", file=sys.stderr)
        return False

    budget = os.getenv("FAIRDIV_ENUMERATION_BUDGET")
    if budget and not budget.isdigit():
        print(f"⚠️ FAIRDIV_ENUMERATION_BUDGET={budget!r} 는 정수가 아닙니다.", file=sys.stderr)
    return True


def main(argv: Optional[List[str]] = None) -> int:
    """메인 함수"""
    if not check_python_version():
        return 1

    check_env_file()

    from app import main as app_main

    return app_main(argv)


if __name__ == "__main__":
    sys.exit(main())
