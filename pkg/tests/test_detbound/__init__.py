"""Module for testing detbound."""

from pathlib import Path

current_dir = Path(__file__).parent
