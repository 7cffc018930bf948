import os

from dotenv import load_dotenv

load_dotenv()

CEG_TOLERANCE = float(os.getenv("CEG_TOLERANCE", "1e-9"))
CEG_SENTINEL = os.getenv("CEG_SENTINEL", "NA-STOP")
CEG_MISSING_VALUES = [
    v.strip() for v in os.getenv("CEG_MISSING_VALUES", ",?,NA").split(",")
]
CEG_ORACLE_MAX_PAIRS = int(os.getenv("CEG_ORACLE_MAX_PAIRS", "10000"))
CEG_LOG_LEVEL = os.getenv("CEG_LOG_LEVEL", "WARNING")
CEG_REPORTS_DIR = os.getenv("CEG_REPORTS_DIR", "reports")
CEG_BENCH_REPEATS = int(os.getenv("CEG_BENCH_REPEATS", "5"))
