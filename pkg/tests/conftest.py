import sys
from pathlib import Path

# run against the checkout even without an install
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
