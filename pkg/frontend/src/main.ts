// Bootstrap: connect, join, pump input into the channel, draw on rAF.
import { fitCamera, type Camera } from "./camera.js";
import { InputMapper } from "./input.js";
import { MatchChannel, matchUrl } from "./net.js";
import { join } from "./protocol.js";
import { applyServerMessage, initialView, pruneExpired } from "./state.js";
import { render } from "./render.js";

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const view = initialView();
const mapper = new InputMapper();
let camera: Camera = fitCamera(canvas.width, canvas.height, 200);

function resize(): void {
  canvas.width = window.innerWidth;
  canvas.height = window.innerHeight;
  camera = fitCamera(canvas.width, canvas.height, view.config?.map_size ?? 200);
}
window.addEventListener("resize", resize);
resize();

const role = new URLSearchParams(window.location.search).get("role") === "spectator"
  ? "spectator" as const
  : "player" as const;

const channel = new MatchChannel(matchUrl(window.location), {
  onMessage: (msg) => {
    applyServerMessage(view, msg, performance.now());
    if (msg.type === "welcome") resize();
  },
  onOpen: () => channel.send(join(role)),
  onClose: () => {
    if (!view.ended) view.connection = "closed";
  },
});

canvas.addEventListener("contextmenu", (e) => e.preventDefault());
canvas.addEventListener("pointerdown", (event) => {
  const button = event.button === 2 ? 2 : 0;
  const msg = mapper.handle(
    { kind: "pointer", button, screenX: event.offsetX, screenY: event.offsetY },
    view, camera);
  if (msg) channel.send(msg);
});
canvas.addEventListener("pointermove", (event) => {
  mapper.handle({ kind: "cursor", screenX: event.offsetX, screenY: event.offsetY },
                view, camera);
});
window.addEventListener("keydown", (event) => {
  if (event.repeat) return;
  const msg = mapper.handle({ kind: "key", key: event.key }, view, camera);
  if (msg) channel.send(msg);
});

function frame(): void {
  pruneExpired(view, performance.now());
  render(ctx, view, camera, performance.now());
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
