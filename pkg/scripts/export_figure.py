"""Write per-cell unit directions and sphere samples for a 3-D picture.

Run: python3 scripts/export_figure.py [problem.json] [out.json]
"""
import sys
from pathlib import Path

from l1faces.cli import main

root = Path(__file__).resolve().parent.parent
src = sys.argv[1] if len(sys.argv) > 1 else str(root / "data" / "two_by_three.json")
out = sys.argv[2] if len(sys.argv) > 2 else "figure_cells.json"
sys.exit(main(["export-fig", "-i", src, "-o", out]))
