// Client view state: the latest snapshot plus HUD ephemera. The client
// never simulates; everything drawn comes from server frames, and a toast
// exists only because a tip frame arrived.
import type {
  MatchInfo,
  PingView,
  ServerMessage,
  SnapshotMessage,
  UnitView,
} from "./protocol.js";

export const TOAST_LIFETIME_MS = 5000;
export const PING_LIFETIME_MS = 3000;

export interface Toast {
  ruleId: string;
  message: string;
  expiresAt: number;
  ping: PingView | null;
}

export interface PingMarker {
  kind: "danger" | "caution";
  x: number;
  y: number;
  expiresAt: number;
  bornAt: number;
}

export type Connection = "connecting" | "open" | "closed" | "error";

export interface ViewState {
  connection: Connection;
  role: "player" | "spectator" | null;
  heroId: number | null;
  config: MatchInfo | null;
  snapshot: SnapshotMessage | null;
  toasts: Toast[];
  pings: PingMarker[];
  selectedTarget: number | null;
  killFeed: string[];
  winner: string | null;
  ended: boolean;
  lastError: string | null;
}

export function initialView(): ViewState {
  return {
    connection: "connecting",
    role: null,
    heroId: null,
    config: null,
    snapshot: null,
    toasts: [],
    pings: [],
    selectedTarget: null,
    killFeed: [],
    winner: null,
    ended: false,
    lastError: null,
  };
}

export function applyServerMessage(view: ViewState, msg: ServerMessage, now: number): void {
  switch (msg.type) {
    case "welcome":
      view.connection = "open";
      view.role = msg.role;
      view.heroId = msg.hero_id;
      view.config = msg.config;
      return;
    case "snapshot":
      if (view.snapshot && msg.tick <= view.snapshot.tick) return; // stale
      view.snapshot = msg;
      for (const ev of msg.events) {
        if (ev.type === "ping") {
          const pos = ev.pos as number[];
          addPing(view, { kind: ev.kind as "danger" | "caution", x: pos[0], y: pos[1] }, now);
        }
      }
      if (view.selectedTarget !== null) {
        const unit = findUnit(view, view.selectedTarget);
        if (!unit || !unit.alive) view.selectedTarget = null;
      }
      return;
    case "tip":
      view.toasts.push({
        ruleId: msg.rule_id,
        message: msg.message,
        expiresAt: now + TOAST_LIFETIME_MS,
        ping: msg.ping,
      });
      if (msg.ping) addPing(view, msg.ping, now);
      return;
    case "event": {
      const ev = msg.event;
      if (ev.type === "kill") {
        view.killFeed.push(`unit ${ev.killer} killed unit ${ev.victim}`);
        if (view.killFeed.length > 6) view.killFeed.shift();
      }
      return;
    }
    case "end":
      view.ended = true;
      view.winner = msg.winner;
      return;
    case "error":
      view.lastError = msg.reason;
      return;
  }
}

function addPing(view: ViewState, ping: PingView, now: number): void {
  view.pings.push({ kind: ping.kind, x: ping.x, y: ping.y,
                    expiresAt: now + PING_LIFETIME_MS, bornAt: now });
}

export function pruneExpired(view: ViewState, now: number): void {
  view.toasts = view.toasts.filter((t) => t.expiresAt > now);
  view.pings = view.pings.filter((p) => p.expiresAt > now);
}

export function findUnit(view: ViewState, id: number): UnitView | undefined {
  return view.snapshot?.units.find((u) => u.id === id);
}

export function myHero(view: ViewState): UnitView | undefined {
  return view.heroId === null ? undefined : findUnit(view, view.heroId);
}

export function unitAt(view: ViewState, wx: number, wy: number,
                       radius = 6): UnitView | undefined {
  if (!view.snapshot) return undefined;
  let best: UnitView | undefined;
  let bestD = radius * radius;
  for (const u of view.snapshot.units) {
    if (!u.alive) continue;
    const dx = u.x - wx;
    const dy = u.y - wy;
    const d = dx * dx + dy * dy;
    if (d <= bestD) {
      best = u;
      bestD = d;
    }
  }
  return best;
}
