"""Time the exhaustive operad-law checks: python3 scripts/time_operad_laws.py E|K law max_total"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import operad_laws  # noqa: E402

OPERADS = {"E": operad_laws.expression_operad, "K": operad_laws.graph_operad}

if __name__ == "__main__":
    name, law, total = sys.argv[1], sys.argv[2], int(sys.argv[3])
    t = time.time()
    count = getattr(operad_laws, f"check_{law}")(OPERADS[name](2), total)
    print(name, law, total, count, f"{time.time() - t:.2f}s", flush=True)
