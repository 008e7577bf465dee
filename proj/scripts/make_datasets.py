#!/usr/bin/env python3
"""Materialize the benchmark CSVs under data/.

  iris         written from scikit-learn's bundled copy of the UCI iris data
  tic-tac-toe  regenerated exactly by enumerating all finished games
               (x moves first); matches the UCI endgame database
  breast-w     downloaded from the UCI archive; needs --allow-network

Run from the repository root:  python3 scripts/make_datasets.py [--allow-network]
"""

import argparse
import csv
import io
import os
import sys
import urllib.request

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")

WINS = [
    (0, 1, 2), (3, 4, 5), (6, 7, 8),   # rows
    (0, 3, 6), (1, 4, 7), (2, 5, 8),   # columns
    (0, 4, 8), (2, 4, 6),              # diagonals
]


def winner(board):
    for a, b, c in WINS:
        if board[a] != "b" and board[a] == board[b] == board[c]:
            return board[a]
    return None


def final_boards():
    """All distinct boards at the end of a legal game, x to move first."""
    seen = set()

    def play(board, player):
        for i in range(9):
            if board[i] != "b":
                continue
            board[i] = player
            if winner(board) or "b" not in board:
                seen.add(tuple(board))
            else:
                play(board, "o" if player == "x" else "x")
            board[i] = "b"

    play(["b"] * 9, "x")
    return sorted(seen)


def write_tictactoe(path):
    squares = [
        "top-left", "top-middle", "top-right",
        "middle-left", "middle-middle", "middle-right",
        "bottom-left", "bottom-middle", "bottom-right",
    ]
    boards = final_boards()
    n_pos = 0
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(squares + ["class"])
        for board in boards:
            label = "positive" if winner(list(board)) == "x" else "negative"
            n_pos += label == "positive"
            w.writerow(list(board) + [label])
    assert len(boards) == 958, f"expected 958 boards, got {len(boards)}"
    assert n_pos == 626, f"expected 626 positive boards, got {n_pos}"
    print(f"wrote {path}: {len(boards)} rows, {n_pos} positive")


def write_iris(path):
    from sklearn.datasets import load_iris

    iris = load_iris()
    names = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(names + ["class"])
        for row, target in zip(iris.data, iris.target):
            w.writerow([f"{v:.1f}" for v in row] + [iris.target_names[target]])
    print(f"wrote {path}: {len(iris.data)} rows")


BREAST_W_URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/"
    "breast-cancer-wisconsin/breast-cancer-wisconsin.data"
)
BREAST_W_COLS = [
    "clump_thickness", "cell_size_uniformity", "cell_shape_uniformity",
    "marginal_adhesion", "epithelial_cell_size", "bare_nuclei",
    "bland_chromatin", "normal_nucleoli", "mitoses",
]


def write_breast_w(path):
    raw = urllib.request.urlopen(BREAST_W_URL, timeout=60).read().decode()
    rows = [line.split(",") for line in raw.splitlines() if line.strip()]
    assert len(rows) == 699, f"expected 699 rows, got {len(rows)}"
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(BREAST_W_COLS + ["class"])
        for r in rows:
            # drop the sample id; keep '?' markers so the loader logs the drops
            label = {"2": "benign", "4": "malignant"}[r[10]]
            w.writerow(r[1:10] + [label])
    print(f"wrote {path}: {len(rows)} rows")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--allow-network", action="store_true",
                    help="also download breast-w from the UCI archive")
    args = ap.parse_args()

    os.makedirs(DATA_DIR, exist_ok=True)
    write_tictactoe(os.path.join(DATA_DIR, "tic-tac-toe.csv"))
    write_iris(os.path.join(DATA_DIR, "iris.csv"))
    if args.allow_network:
        write_breast_w(os.path.join(DATA_DIR, "breast-w.csv"))
    else:
        print("skipping breast-w (pass --allow-network to download it)")


if __name__ == "__main__":
    main()
