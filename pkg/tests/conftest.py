import sys
from pathlib import Path

from hypothesis import settings

# tests/ is imported as top-level modules; make `import support` reliable
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")
