"""Configure test environment."""

import sys
from pathlib import Path

import hypothesis

# Add the project root and the src directory to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(project_root / "src"))

# Symbolic computations are slow and vary in time; bound the example count instead.
hypothesis.settings.register_profile("symbolic", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("symbolic")
