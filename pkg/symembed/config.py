import os
from pathlib import Path
from dotenv import load_dotenv
import logging

load_dotenv()

class Config:
    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FILE = os.getenv("LOG_FILE", "")

    # Bounded searches (closedness brute force, very-flat, minimal elements)
    DEFAULT_BOUND = int(os.getenv("SYMEMBED_BOUND", 4))
    CLOSURE_ROUNDS = int(os.getenv("SYMEMBED_CLOSURE_ROUNDS", 6))
    ENUM_LIMIT = int(os.getenv("SYMEMBED_ENUM_LIMIT", 200000))

    # Built-in symmetric spaces
    CATALOG_DIR = Path(os.getenv("SYMEMBED_CATALOG_DIR",
                                 Path(__file__).parent / "catalog_data"))

    @staticmethod
    def setup_logging():
        handlers = [logging.StreamHandler()]
        if Config.LOG_FILE:
            Path(Config.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(Config.LOG_FILE))
        logging.basicConfig(
            level=getattr(logging, Config.LOG_LEVEL.upper(), logging.WARNING),
            format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
            handlers=handlers
        )
