// Canvas renderer: shapes and colors only, everything drawn straight from
// the latest snapshot plus HUD ephemera (toasts, pings, kill feed).
import { worldToScreen, type Camera } from "./camera.js";
import type { UnitView } from "./protocol.js";
import { myHero, type ViewState } from "./state.js";

const TEAM_COLORS = { blue: "#4e9af1", red: "#e4574f" } as const;
const PING_COLORS = { danger: "#ff3434", caution: "#f1c232" } as const;

export function render(ctx: CanvasRenderingContext2D, view: ViewState,
                       cam: Camera, now: number): void {
  const { width, height } = ctx.canvas;
  ctx.fillStyle = "#10141c";
  ctx.fillRect(0, 0, width, height);

  if (!view.snapshot || !view.config) {
    drawCenterText(ctx, view.connection === "error" || view.lastError
      ? `connection error: ${view.lastError ?? "unknown"}`
      : "connecting…");
    return;
  }

  drawMap(ctx, view, cam);
  for (const unit of view.snapshot.units) {
    drawUnit(ctx, unit, cam, unit.id === view.selectedTarget);
  }
  for (const ping of view.pings) {
    drawPing(ctx, view, cam, ping, now);
  }
  drawHud(ctx, view);
  if (view.ended) {
    drawCenterText(ctx, view.winner ? `${view.winner} team wins` : "match over (draw)");
  }
}

function drawMap(ctx: CanvasRenderingContext2D, view: ViewState, cam: Camera): void {
  const size = view.config!.map_size;
  const tl = worldToScreen(cam, 0, 0);
  const br = worldToScreen(cam, size, size);
  ctx.fillStyle = "#1b2230";
  ctx.fillRect(tl.x, tl.y, br.x - tl.x, br.y - tl.y);
  ctx.strokeStyle = "#2d3950";
  ctx.lineWidth = 1;
  ctx.strokeRect(tl.x, tl.y, br.x - tl.x, br.y - tl.y);
  ctx.strokeStyle = "#273349";
  ctx.lineWidth = 8;
  ctx.lineCap = "round";
  for (const waypoints of Object.values(view.config!.lanes)) {
    ctx.beginPath();
    waypoints.forEach(([x, y], i) => {
      const p = worldToScreen(cam, x, y);
      if (i === 0) ctx.moveTo(p.x, p.y);
      else ctx.lineTo(p.x, p.y);
    });
    ctx.stroke();
  }
}

function drawUnit(ctx: CanvasRenderingContext2D, unit: UnitView, cam: Camera,
                  selected: boolean): void {
  const p = worldToScreen(cam, unit.x, unit.y);
  const color = TEAM_COLORS[unit.team];
  ctx.globalAlpha = unit.alive ? 1.0 : 0.25;
  ctx.fillStyle = color;
  if (unit.kind === "tower") {
    ctx.fillRect(p.x - 6, p.y - 6, 12, 12);
  } else if (unit.kind === "nexus") {
    ctx.beginPath();
    ctx.moveTo(p.x, p.y - 9);
    ctx.lineTo(p.x + 9, p.y);
    ctx.lineTo(p.x, p.y + 9);
    ctx.lineTo(p.x - 9, p.y);
    ctx.closePath();
    ctx.fill();
  } else {
    const r = unit.kind === "hero" ? 6 : 3;
    ctx.beginPath();
    ctx.arc(p.x, p.y, r, 0, Math.PI * 2);
    ctx.fill();
  }
  if (selected) {
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.arc(p.x, p.y, 9, 0, Math.PI * 2);
    ctx.stroke();
  }
  if (unit.alive && unit.kind !== "minion") {
    const w = unit.kind === "hero" ? 18 : 14;
    const frac = Math.max(0, unit.hp / unit.max_hp);
    ctx.fillStyle = "#000000";
    ctx.fillRect(p.x - w / 2, p.y - 13, w, 3);
    ctx.fillStyle = frac > 0.35 ? "#58d68d" : "#e74c3c";
    ctx.fillRect(p.x - w / 2, p.y - 13, w * frac, 3);
  }
  if (unit.alive && unit.statuses.length > 0) {
    ctx.fillStyle = "#d2b4de";
    ctx.font = "8px monospace";
    ctx.fillText(unit.statuses.map((s) => s[0]).join(""), p.x + 7, p.y - 7);
  }
  ctx.globalAlpha = 1.0;
}

function drawPing(ctx: CanvasRenderingContext2D, view: ViewState, cam: Camera,
                  ping: { kind: "danger" | "caution"; x: number; y: number; bornAt: number },
                  now: number): void {
  const p = worldToScreen(cam, ping.x, ping.y);
  const age = (now - ping.bornAt) / 1000;
  const radius = 6 + (age % 1) * 14;
  ctx.strokeStyle = PING_COLORS[ping.kind];
  ctx.lineWidth = 2;
  ctx.globalAlpha = Math.max(0.15, 1 - (age % 1));
  ctx.beginPath();
  ctx.arc(p.x, p.y, radius, 0, Math.PI * 2);
  ctx.stroke();
  ctx.globalAlpha = 1.0;
  flashEdgeToward(ctx, view, cam, p, PING_COLORS[ping.kind]);
}

// Flash the canvas edge toward the ping anchor so off-screen-ish alerts
// still register in peripheral vision.
function flashEdgeToward(ctx: CanvasRenderingContext2D, view: ViewState, cam: Camera,
                         target: { x: number; y: number }, color: string): void {
  const hero = myHero(view);
  const origin = hero ? worldToScreen(cam, hero.x, hero.y)
                      : { x: ctx.canvas.width / 2, y: ctx.canvas.height / 2 };
  const dx = target.x - origin.x;
  const dy = target.y - origin.y;
  if (dx === 0 && dy === 0) return;
  const { width, height } = ctx.canvas;
  const tx = dx > 0 ? (width - origin.x) / dx : dx < 0 ? -origin.x / dx : Infinity;
  const ty = dy > 0 ? (height - origin.y) / dy : dy < 0 ? -origin.y / dy : Infinity;
  const t = Math.min(tx, ty);
  if (!isFinite(t)) return;
  const ex = origin.x + dx * t;
  const ey = origin.y + dy * t;
  ctx.fillStyle = color;
  ctx.globalAlpha = 0.5;
  ctx.fillRect(ex - 16, ey - 16, 32, 32);
  ctx.globalAlpha = 1.0;
}

function drawHud(ctx: CanvasRenderingContext2D, view: ViewState): void {
  const { width, height } = ctx.canvas;
  ctx.font = "13px sans-serif";
  ctx.textBaseline = "top";

  // tip toasts, newest at the top right
  let y = 14;
  for (const toast of [...view.toasts].reverse()) {
    const text = toast.message;
    const w = ctx.measureText(text).width + 20;
    ctx.fillStyle = "rgba(20, 26, 38, 0.92)";
    ctx.fillRect(width - w - 14, y, w, 26);
    ctx.strokeStyle = toast.ping ? PING_COLORS[toast.ping.kind] : "#5d6d7e";
    ctx.strokeRect(width - w - 14, y, w, 26);
    ctx.fillStyle = "#ecf0f1";
    ctx.fillText(text, width - w - 4 - 10 + 4, y + 6);
    y += 32;
  }

  ctx.fillStyle = "#808b96";
  let feedY = 14;
  for (const line of view.killFeed) {
    ctx.fillText(line, 14, feedY);
    feedY += 17;
  }

  const hero = myHero(view);
  if (hero) {
    const barW = 220;
    const x = (width - barW) / 2;
    const base = height - 58;
    ctx.fillStyle = "rgba(20, 26, 38, 0.92)";
    ctx.fillRect(x - 10, base - 8, barW + 20, 56);
    ctx.fillStyle = "#26343f";
    ctx.fillRect(x, base, barW, 10);
    ctx.fillStyle = "#58d68d";
    ctx.fillRect(x, base, barW * Math.max(0, hero.hp / hero.max_hp), 10);
    ctx.fillStyle = "#26343f";
    ctx.fillRect(x, base + 14, barW, 6);
    ctx.fillStyle = "#5dade2";
    ctx.fillRect(x, base + 14, barW * Math.min(1, hero.mana / 200), 6);
    ctx.fillStyle = "#ecf0f1";
    ctx.fillText(`lvl ${hero.level}`, x, base + 24);
    const cds = view.snapshot!.cooldowns;
    if (cds) {
      let cx = x + 50;
      for (const slot of ["Q", "W", "E", "R"]) {
        const cd = cds[slot] ?? 0;
        ctx.fillStyle = cd > 0 ? "#7f8c8d" : "#f4d03f";
        ctx.fillText(cd > 0 ? `${slot}:${cd}` : slot, cx, base + 24);
        cx += 44;
      }
    }
    if (!hero.alive) {
      drawCenterText(ctx, "respawning…");
    }
  }
}

function drawCenterText(ctx: CanvasRenderingContext2D, text: string): void {
  ctx.fillStyle = "#ecf0f1";
  ctx.font = "20px sans-serif";
  ctx.textBaseline = "middle";
  const w = ctx.measureText(text).width;
  ctx.fillText(text, (ctx.canvas.width - w) / 2, ctx.canvas.height / 2);
}
