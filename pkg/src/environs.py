"""
Module reads environ variables
"""

import os

from dotenv import load_dotenv

load_dotenv()

DATA_DIR = os.getenv("LOANBENCH_DATA_DIR", "data/")
OUTPUT_DIR = os.getenv("LOANBENCH_OUTPUT_DIR", "output/")

LOG_LEVEL = os.getenv("LOANBENCH_LOG_LEVEL", "INFO")
WORKERS = int(os.getenv("LOANBENCH_WORKERS", "4"))

ORIGINATION_FILE_TEMPLATE = "sample_orig_{year}.txt"
PERFORMANCE_FILE_TEMPLATE = "sample_svcg_{year}.txt"

__all__ = [
    "DATA_DIR",
    "OUTPUT_DIR",
    "LOG_LEVEL",
    "WORKERS",
    "ORIGINATION_FILE_TEMPLATE",
    "PERFORMANCE_FILE_TEMPLATE",
]
