"""Writes the example scene files. Rotations are emitted at full precision
because transform loading rejects matrices that are not orthonormal to 1e-9."""

import json
import math
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent


def transform(r=None, t=(0.0, 0.0, 0.0)):
    r = np.eye(3) if r is None else np.asarray(r)
    return {"r": [float(v) for v in r.reshape(-1)], "t": [float(v) for v in t]}


def camera_rotation(pitch_deg):
    """Optical frame (x right, y down, z forward) of a camera looking along
    platform +x, pitched down by `pitch_deg`."""
    p = math.radians(pitch_deg)
    z = np.array([math.cos(p), 0.0, -math.sin(p)])
    x = np.array([0.0, -1.0, 0.0])
    y = np.cross(z, x)
    return np.column_stack([x, y, z])


def rot_z(deg):
    a = math.radians(deg)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def base_scene(seed):
    return {
        "seed": seed,
        "classes": 3,
        "camera": {
            "intrinsics": {"fx": 500.0, "fy": 500.0, "cx": 320.0, "cy": 240.0},
            "width": 640,
            "height": 480,
            "lidar_T_camera": transform(camera_rotation(45.0), (0.05, 0.0, -0.1)),
        },
        "platform_T_lidar": transform(t=(0.0, 0.0, 0.8)),
        "platform": {"position": [2.0, 1.0, 0.0], "mission_start": [0.0, 0.0, 0.0]},
        "offset_convention": "current_minus_start",
        "objects": [],
        "noise": {"depth_sigma": 0.0, "box_jitter_px": 0.0, "mask_erosion": 0, "label_flip": 0.0},
        "arm": {
            "platform_T_base": transform(t=(0.25, 0.0, 0.35)),
            "effector_T_fingers": transform(t=(0.0, 0.0, 0.2)),
            "fingers_T_camera": transform(t=(0.0, 0.05, 0.0)),
            "camera": {
                "intrinsics": {"fx": 200.0, "fy": 200.0, "cx": 120.0, "cy": 90.0},
                "width": 240,
                "height": 180,
            },
            "views": [],
        },
        "grasp": {"k_neighbors": 30, "plane_band": 0.01},
        "manipulation": {"close_step_mm": 1.0, "slip_ticks": [], "hold_ticks": 60},
    }


def side_views(centre, distance):
    cx, cy, cz = centre
    return [
        {"look_from": [cx, cy + distance, cz], "look_at": list(centre)},
        {"look_from": [cx, cy - distance, cz], "look_at": list(centre)},
    ]


def box(centre, size, label, material="plastic", yaw=0.0):
    return {"shape": "box", "size": list(size), "pose": transform(rot_z(yaw), centre),
            "label": label, "material": material}


def main():
    centre = (2.6, 1.0, 0.075)

    single = base_scene(7)
    single["objects"] = [box(centre, (0.04, 0.06, 0.15), 1)]
    single["arm"]["views"] = side_views(centre, 0.3)
    single["manipulation"]["slip_ticks"] = [20]

    glass = base_scene(11)
    glass["objects"] = [box(centre, (0.04, 0.06, 0.15), 2, material="glass")]
    glass["arm"]["views"] = side_views(centre, 0.3)

    multi = base_scene(5)
    multi["objects"] = [
        box(centre, (0.04, 0.06, 0.15), 1),
        {"shape": "sphere", "size": [0.05], "pose": transform(t=(2.75, 1.35, 0.05)), "label": 0,
         "material": "plastic"},
        {"shape": "cylinder", "size": [0.03, 0.12], "pose": transform(t=(2.9, 0.7, 0.06)),
         "label": 2, "material": "metal"},
    ]
    multi["arm"]["views"] = side_views(centre, 0.3)
    multi["noise"] = {"depth_sigma": 0.0, "box_jitter_px": 1.5, "mask_erosion": 1, "label_flip": 0.0}

    for name, scene in [("single_box", single), ("glass_box", glass), ("three_objects", multi)]:
        (HERE / f"{name}.json").write_text(json.dumps(scene, indent=2) + "\n")


if __name__ == "__main__":
    main()
