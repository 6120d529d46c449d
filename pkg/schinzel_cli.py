"""
Command-line launcher for Schinzel Lab.
Run with: python schinzel_cli.py <command> [options]
"""

import sys
from pathlib import Path

# Add project root to path for imports
ROOT_DIR = Path(__file__).parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

# Import after path setup
from app.main import main


if __name__ == "__main__":
    sys.exit(main())
