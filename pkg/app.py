import sys
import logging

from dotenv import load_dotenv

# Load environment variables before settings are read
load_dotenv()

from src.config import settings
from src.utils.logger_config import setup_logging
from src.routes.cli_routes import main

# Setup logging
setup_logging(
    log_level=settings.LOG_LEVEL,
    log_dir=settings.LOG_DIR,
    enable_file=settings.LOG_TO_FILE,
    enable_json=settings.LOG_JSON,
)

# counts run to hundreds of thousands of digits
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

logger = logging.getLogger(__name__)


if __name__ == "__main__":
    logger.debug(f"Invoked with {sys.argv[1:]}")
    sys.exit(main())
