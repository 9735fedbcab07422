// Thin WebSocket wrapper around the /match channel.
import { parseServerMessage, type ClientMessage, type ServerMessage } from "./protocol.js";

export interface NetHandlers {
  onMessage: (msg: ServerMessage) => void;
  onOpen?: () => void;
  onClose?: () => void;
}

export class MatchChannel {
  private ws: WebSocket;

  constructor(url: string, handlers: NetHandlers) {
    this.ws = new WebSocket(url);
    this.ws.addEventListener("open", () => handlers.onOpen?.());
    this.ws.addEventListener("close", () => handlers.onClose?.());
    this.ws.addEventListener("message", (event) => {
      const msg = parseServerMessage(String(event.data));
      if (msg) handlers.onMessage(msg);
    });
  }

  send(msg: ClientMessage): void {
    if (this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(msg));
    }
  }
}

export function matchUrl(loc: { protocol: string; host: string }): string {
  const scheme = loc.protocol === "https:" ? "wss" : "ws";
  return `${scheme}://${loc.host}/match`;
}
