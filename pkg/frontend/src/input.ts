// Pointer/keyboard intent -> wire message. Kept free of DOM types so the
// mapping is unit-testable; main.ts adapts real events into these shapes.
import { clampToMap, screenToWorld, type Camera } from "./camera.js";
import {
  command,
  SCHEMA_VERSION,
  type ClientMessage,
  type WireCommand,
} from "./protocol.js";
import { myHero, unitAt, type ViewState } from "./state.js";

export interface PointerInput {
  kind: "pointer";
  button: 0 | 2; // left | right
  screenX: number;
  screenY: number;
}

export interface KeyInput {
  kind: "key";
  key: string;
}

export interface CursorInput {
  kind: "cursor";
  screenX: number;
  screenY: number;
}

export type UiInput = PointerInput | KeyInput | CursorInput;

const CAST_KEYS: Record<string, "Q" | "W" | "E" | "R"> = {
  q: "Q", w: "W", e: "E", r: "R",
};

export class InputMapper {
  pingArmed = false;
  private cursor: { x: number; y: number } | null = null;

  handle(input: UiInput, view: ViewState, cam: Camera): ClientMessage | null {
    if (input.kind === "cursor") {
      this.cursor = { x: input.screenX, y: input.screenY };
      return null;
    }
    if (view.role !== "player" || !view.snapshot || !view.config) return null;
    const hero = myHero(view);
    if (!hero || !hero.alive) return null; // inputs while dead are suppressed

    if (input.kind === "key") {
      const key = input.key.toLowerCase();
      if (key === "g") {
        this.pingArmed = true;
        return null;
      }
      const slot = CAST_KEYS[key];
      if (slot === undefined) return null;
      return command(this.castCommand(slot, view, cam));
    }

    const world = clampToMap(
      screenToWorld(cam, input.screenX, input.screenY), view.config.map_size);
    if (input.button === 0) {
      if (this.pingArmed) {
        this.pingArmed = false;
        return { v: SCHEMA_VERSION, type: "ping", x: world.x, y: world.y, kind: "caution" };
      }
      const unit = unitAt(view, world.x, world.y);
      view.selectedTarget = unit ? unit.id : null;
      return null;
    }
    // right click: attack a living enemy under the cursor, otherwise move
    const unit = unitAt(view, world.x, world.y);
    if (unit && unit.team !== hero.team) {
      view.selectedTarget = unit.id;
      return command({ kind: "attack", target: unit.id });
    }
    return command({ kind: "move_to", x: world.x, y: world.y });
  }

  private castCommand(slot: "Q" | "W" | "E" | "R", view: ViewState,
                      cam: Camera): WireCommand {
    if (view.selectedTarget !== null) {
      return { kind: "cast", slot, target: view.selectedTarget };
    }
    if (this.cursor && view.config) {
      const world = clampToMap(
        screenToWorld(cam, this.cursor.x, this.cursor.y), view.config.map_size);
      return { kind: "cast", slot, x: world.x, y: world.y };
    }
    return { kind: "cast", slot };
  }
}
