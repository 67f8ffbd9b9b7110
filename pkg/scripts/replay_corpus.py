"""Replay the bundled example corpus and print the per-check table.

    python scripts/replay_corpus.py [path/to/corpus.json]
"""

import sys

from lftdisk import corpus


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else None
    report = corpus.run(corpus.load(path))
    print(report.table())
    cells = corpus.witnessed_cells(corpus.load(path))
    print(f"witnessed cells: {len(cells)}")
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
