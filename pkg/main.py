"""
Main entry point for the neural exchange-rate forecasting toolkit.
Run ``python main.py --help`` for the subcommands.
"""
# Load environment variables FIRST before any other imports
import sys
from pathlib import Path
from dotenv import load_dotenv

# Load .env file
env_path = Path(__file__).parent / '.env'
load_dotenv(env_path)

from src.cli import run_cli

if __name__ == "__main__":
    sys.exit(run_cli())
