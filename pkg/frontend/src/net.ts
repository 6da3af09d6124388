/**
 * WebSocket wrapper with a mailbox: socket callbacks only enqueue, and the
 * render loop drains the queue on its own schedule, so all state changes
 * happen on one thread of control.
 */

import {
  ClientMessage,
  ServerMessage,
  decodeMessage,
  encodeMessage,
} from "./protocol.js";

export class SessionClient {
  private ws: WebSocket | null = null;
  private queue: ServerMessage[] = [];
  closed = false;

  connect(url: string, hello: ClientMessage): void {
    const ws = new WebSocket(url);
    this.ws = ws;
    ws.onopen = () => ws.send(encodeMessage(hello));
    ws.onmessage = (ev) => {
      try {
        this.queue.push(decodeMessage(String(ev.data)));
      } catch (err) {
        this.queue.push({ type: "error", code: "client_decode",
                          message: String(err) });
      }
    };
    ws.onclose = () => {
      this.closed = true;
    };
    ws.onerror = () => {
      this.queue.push({ type: "error", code: "socket",
                        message: "connection failed" });
      this.closed = true;
    };
  }

  /** Take everything that arrived since the last drain. */
  drain(): ServerMessage[] {
    const out = this.queue;
    this.queue = [];
    return out;
  }

  send(msg: ClientMessage): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(encodeMessage(msg));
    }
  }

  close(): void {
    this.ws?.close();
  }
}
