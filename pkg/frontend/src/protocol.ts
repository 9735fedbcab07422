// Wire protocol for the live match channel. Mirrors the server's JSON
// schema (served at /schema, shipped as data/messages.schema.json).

export const SCHEMA_VERSION = 1;

export interface MatchInfo {
  tick_rate: number;
  snapshot_every: number;
  map_size: number;
  heroes_per_team: number;
  condition: string;
  lanes: Record<string, number[][]>;
}

export interface UnitView {
  id: number;
  kind: "hero" | "minion" | "tower" | "nexus";
  team: "blue" | "red";
  x: number;
  y: number;
  hp: number;
  max_hp: number;
  mana: number;
  level: number;
  alive: boolean;
  statuses: string[];
}

export interface WelcomeMessage {
  v: number;
  type: "welcome";
  role: "player" | "spectator";
  hero_id: number | null;
  config: MatchInfo;
}

export interface SnapshotMessage {
  v: number;
  type: "snapshot";
  tick: number;
  units: UnitView[];
  cooldowns: Record<string, number> | null;
  events: EventRecord[];
}

export interface EventRecord {
  tick: number;
  type: string;
  [key: string]: unknown;
}

export interface PingView {
  kind: "danger" | "caution";
  x: number;
  y: number;
}

export interface TipMessage {
  v: number;
  type: "tip";
  tick: number;
  rule_id: string;
  message: string;
  ping: PingView | null;
}

export interface EventMessage {
  v: number;
  type: "event";
  event: EventRecord;
}

export interface EndMessage {
  v: number;
  type: "end";
  tick: number;
  winner: string | null;
}

export interface ErrorMessage {
  v: number;
  type: "error";
  reason: string;
}

export type ServerMessage =
  | WelcomeMessage
  | SnapshotMessage
  | TipMessage
  | EventMessage
  | EndMessage
  | ErrorMessage;

export type WireCommand =
  | { kind: "move_to"; x: number; y: number }
  | { kind: "attack"; target: number }
  | { kind: "cast"; slot: "Q" | "W" | "E" | "R"; target?: number; x?: number; y?: number }
  | { kind: "ping"; x: number; y: number; ping: "danger" | "caution" }
  | { kind: "idle" };

export interface JoinMessage {
  v: number;
  type: "join";
  role: "player" | "spectator";
}

export interface CommandMessage {
  v: number;
  type: "command";
  command: WireCommand;
}

export interface ManualPingMessage {
  v: number;
  type: "ping";
  x: number;
  y: number;
  kind: "danger" | "caution";
}

export type ClientMessage = JoinMessage | CommandMessage | ManualPingMessage;

const SERVER_TYPES = new Set(["welcome", "snapshot", "tip", "event", "end", "error"]);

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as { v?: unknown; type?: unknown };
  if (msg.v !== SCHEMA_VERSION || typeof msg.type !== "string") return null;
  if (!SERVER_TYPES.has(msg.type)) return null;
  return data as ServerMessage;
}

export function join(role: "player" | "spectator"): JoinMessage {
  return { v: SCHEMA_VERSION, type: "join", role };
}

export function command(cmd: WireCommand): CommandMessage {
  return { v: SCHEMA_VERSION, type: "command", command: cmd };
}
