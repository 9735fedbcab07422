// World <-> screen transform. The arena is a square [0, mapSize]^2 scaled
// uniformly into the canvas with a margin; world y grows downward on
// screen, matching the top-down sim coordinates.

export interface Camera {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export function fitCamera(canvasW: number, canvasH: number, mapSize: number,
                          margin = 20): Camera {
  const usable = Math.max(1, Math.min(canvasW, canvasH) - 2 * margin);
  const scale = usable / mapSize;
  return {
    scale,
    offsetX: (canvasW - mapSize * scale) / 2,
    offsetY: (canvasH - mapSize * scale) / 2,
  };
}

export function worldToScreen(cam: Camera, x: number, y: number): { x: number; y: number } {
  return { x: cam.offsetX + x * cam.scale, y: cam.offsetY + y * cam.scale };
}

export function screenToWorld(cam: Camera, sx: number, sy: number): { x: number; y: number } {
  return { x: (sx - cam.offsetX) / cam.scale, y: (sy - cam.offsetY) / cam.scale };
}

export function clampToMap(p: { x: number; y: number }, mapSize: number) {
  return {
    x: Math.min(Math.max(p.x, 0), mapSize),
    y: Math.min(Math.max(p.y, 0), mapSize),
  };
}
