"""Writes the small example inputs used by the CLI tests."""

import json
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent


def box_cloud(rng, n, size):
    size = np.asarray(size)
    areas = np.array([size[1] * size[2], size[0] * size[2], size[0] * size[1]])
    pts = (rng.random((n, 3)) - 0.5) * size
    axis = rng.choice(3, size=n, p=areas / areas.sum())
    sign = rng.choice([-0.5, 0.5], size=n)
    pts[np.arange(n), axis] = sign * size[axis]
    return pts


def write_ply(path, pts):
    lines = ["ply", "format ascii 1.0", f"element vertex {len(pts)}",
             "property float x", "property float y", "property float z", "end_header"]
    lines += [f"{x:.6f} {y:.6f} {z:.6f}" for x, y, z in pts]
    path.write_text("\n".join(lines) + "\n")


def write_pgm(path, img):
    h, w = img.shape
    path.write_bytes(f"P5\n{w} {h}\n255\n".encode() + img.astype(np.uint8).tobytes())


def frames(shift):
    out = []
    for i in range(4):
        img = np.full((320, 240), 60, dtype=np.uint8)
        dy = shift if i >= 2 else 0
        img[120 + dy:180 + dy, 90:150] = 190
        out.append(img)
    return out


def main():
    rng = np.random.default_rng(3)
    # Rotated so the box is not axis-aligned in the file.
    a = np.deg2rad(30.0)
    rot = np.array([[np.cos(a), -np.sin(a), 0], [np.sin(a), np.cos(a), 0], [0, 0, 1]])
    pts = box_cloud(rng, 800, [0.04, 0.06, 0.15]) @ rot.T + np.array([0.6, 0.1, 0.3])
    write_ply(HERE / "box_60mm.ply", pts)
    (HERE / "grasp.json").write_text(json.dumps({"k_neighbors": 20, "plane_band": 0.01}, indent=2) + "\n")

    for name, shift in [("slip", 12), ("still", 0)]:
        for i, img in enumerate(frames(shift)):
            write_pgm(HERE / f"{name}_f{i}.pgm", img)

    dets = [
        {"detections": [{"box": [50, 40, 20, 30], "label": 1, "score": 0.95},
                        {"box": [120, 80, 10, 10], "label": 1, "score": 0.30},
                        {"box": [200, 100, 40, 20], "label": 2, "score": 0.80}]},
        {"detections": [{"box": [31, 30, 18, 18], "label": 2, "score": 0.70}]},
    ]
    gts = [
        {"ground_truths": [{"box": [50, 41, 20, 30], "label": 1}, {"box": [201, 100, 40, 20], "label": 2}]},
        {"ground_truths": [{"box": [30, 30, 20, 20], "label": 2}]},
    ]
    (HERE / "dets.jsonl").write_text("".join(json.dumps(d) + "\n" for d in dets))
    (HERE / "gts.jsonl").write_text("".join(json.dumps(g) + "\n" for g in gts))

    cases = {
        "loss_unit.json": {"kind": "yolact_components", "cls": 1, "box": 1, "mask": 1},
        "loss_yolo.json": {"kind": "yolo", "s": 1, "b": 1,
                           "pred": [{"box": [0.6, 0.5, 0.5, 0.5], "confidence": 1, "class_probs": [1, 0]}],
                           "target": [{"box": [0.5, 0.5, 0.5, 0.5], "confidence": 1, "class_probs": [1, 0],
                                       "object": True}]},
        "loss_bce.json": {"kind": "mask_bce", "pred": [[0.5, 0.5], [0.5, 0.5]], "gt": [[1, 0], [0, 1]]},
    }
    for name, case in cases.items():
        (HERE / name).write_text(json.dumps(case, indent=2) + "\n")


if __name__ == "__main__":
    main()
