"""Scene ingestion: the raw terrain input for the planning pipeline.

A scene is a covering-cell grid with optional elevation (meters, one
sample per cell), an optional binary land-class mask (1 = workable) and
per-robot depot cells.  Cells are addressed ``(x, y)`` with the origin
at the south-west corner; rasters are numpy arrays indexed ``[y, x]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import rasters

Cell = tuple[int, int]


class SceneError(ValueError):
    """Raised for malformed or inconsistent scene inputs."""


@dataclass
class Scene:
    width: int
    height: int
    cell_size: float = 1.0
    elevation: np.ndarray | None = None      # meters, shape (height, width)
    blocked: np.ndarray = field(default=None)  # bool, shape (height, width)
    landclass: np.ndarray | None = None      # bool, True = workable
    depots: list[Cell] = field(default_factory=list)

    def __post_init__(self):
        if self.blocked is None:
            self.blocked = np.zeros((self.height, self.width), dtype=bool)
        self.depots = [tuple(d) for d in self.depots]

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def validate(self) -> None:
        if self.width < 1 or self.height < 1:
            raise SceneError("scene dimensions must be positive")
        if self.cell_size <= 0:
            raise SceneError("cell_size must be positive")
        if self.blocked.shape != (self.height, self.width):
            raise SceneError("blocked raster size mismatch")
        if self.elevation is not None and self.elevation.shape != (self.height, self.width):
            raise SceneError(
                f"elevation raster size mismatch: expected "
                f"{self.height}x{self.width}, got {self.elevation.shape[0]}x{self.elevation.shape[1]}"
            )
        if self.landclass is not None and self.landclass.shape != (self.height, self.width):
            raise SceneError("land-class raster size mismatch")
        if not self.depots:
            raise SceneError("scene needs at least one depot")
        if len(set(self.depots)) != len(self.depots):
            raise SceneError("depot cells must be distinct")
        for d in self.depots:
            if not self.in_bounds(d):
                raise SceneError(f"depot {d} outside the grid")
            x, y = d
            if self.blocked[y, x]:
                raise SceneError(f"depot {d} lies on a blocked cell")
            if self.landclass is not None and not self.landclass[y, x]:
                raise SceneError(f"depot {d} lies in a non-working region")


def load_scene(path) -> Scene:
    """Load and validate a scene JSON document.

    Raster paths in the document are resolved relative to the document's
    directory.  NODATA elevation cells are folded into the blocked set.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SceneError(f"{path}: not valid JSON ({exc})") from exc
    for key in ("width", "height"):
        if key not in doc:
            raise SceneError(f"{path}: missing required field '{key}'")

    width = int(doc["width"])
    height = int(doc["height"])
    cell_size = float(doc.get("cell_size", 1.0))
    blocked = np.zeros((height, width), dtype=bool)
    for item in doc.get("blocked", []):
        x, y = int(item[0]), int(item[1])
        if not (0 <= x < width and 0 <= y < height):
            raise SceneError(f"{path}: blocked cell ({x}, {y}) outside the grid")
        blocked[y, x] = True

    elevation = None
    if doc.get("elevation_file"):
        elev_path = path.parent / doc["elevation_file"]
        values, nodata, _ = rasters.read_esri_ascii(elev_path)
        if values.shape != (height, width):
            raise SceneError(
                f"{elev_path}: elevation raster size mismatch "
                f"({values.shape[0]}x{values.shape[1]} vs {height}x{width})"
            )
        elevation = values
        blocked |= nodata

    landclass = None
    if doc.get("landclass_file"):
        mask_path = path.parent / doc["landclass_file"]
        landclass = rasters.read_mask_grid(mask_path)
        if landclass.shape != (height, width):
            raise SceneError(f"{mask_path}: land-class raster size mismatch")

    depots = [(int(d[0]), int(d[1])) for d in doc.get("depots", [])]
    scene = Scene(width=width, height=height, cell_size=cell_size,
                  elevation=elevation, blocked=blocked,
                  landclass=landclass, depots=depots)
    scene.validate()
    return scene


def save_scene(scene: Scene, path, name: str | None = None) -> Path:
    """Write a scene as JSON plus sidecar rasters next to it."""
    path = Path(path)
    stem = name or path.stem
    doc = {
        "width": scene.width,
        "height": scene.height,
        "cell_size": scene.cell_size,
        "depots": [list(d) for d in scene.depots],
        "blocked": [[x, y] for y in range(scene.height) for x in range(scene.width)
                    if scene.blocked[y, x]],
    }
    if scene.elevation is not None:
        elev_name = f"{stem}_elevation.asc"
        rasters.write_esri_ascii(path.parent / elev_name, scene.elevation, scene.cell_size)
        doc["elevation_file"] = elev_name
    if scene.landclass is not None:
        mask_name = f"{stem}_landclass.txt"
        rasters.write_mask_grid(path.parent / mask_name, scene.landclass)
        doc["landclass_file"] = mask_name
    path.write_text(json.dumps(doc, indent=2, sort_keys=True))
    return path
