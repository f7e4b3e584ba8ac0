/**
 * WebSocket transport (browser). The session service speaks raw TCP lines;
 * point this at a websocket endpoint that bridges one TCP session (e.g. any
 * generic ws<->tcp relay) and it carries the identical line protocol.
 */

import { LineBuffer, Transport } from "./transport.js";

export class WsTransport implements Transport {
  private ws: WebSocket;
  private buffer = new LineBuffer();
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.onmessage = (event) => {
      const text = typeof event.data === "string" ? event.data : "";
      const lines = text.includes("\n") ? this.buffer.push(text) : [text.trim()];
      for (const line of lines) {
        if (!line) continue;
        for (const handler of this.lineHandlers) handler(line);
      }
    };
    this.ws.onclose = () => {
      for (const handler of this.closeHandlers) handler();
    };
  }

  sendLine(line: string): void {
    this.ws.send(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.ws.close();
  }
}
