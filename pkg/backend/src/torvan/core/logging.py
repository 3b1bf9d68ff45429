import logging
import sys

from torvan.core.config import settings

LOG_DIR = settings.LOG_DIR
LOG_DIR.mkdir(parents=True, exist_ok=True)
LOG_FILE_PATH = LOG_DIR / "torvan.log"

logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.StreamHandler(sys.stderr),  # stdout is reserved for reports
        logging.FileHandler(LOG_FILE_PATH, encoding="utf-8"),
    ],
)

logger = logging.getLogger("torvan")
