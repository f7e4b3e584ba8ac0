/** TCP transport (Node only): used by the test suite and headless tooling. */

import * as net from "node:net";

import { LineBuffer, Transport } from "./transport.js";

export class TcpTransport implements Transport {
  private socket: net.Socket;
  private buffer = new LineBuffer();
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];

  private constructor(socket: net.Socket) {
    this.socket = socket;
    socket.setEncoding("utf-8");
    socket.on("data", (chunk: string) => {
      for (const line of this.buffer.push(chunk)) {
        for (const handler of this.lineHandlers) handler(line);
      }
    });
    const closed = () => {
      for (const handler of this.closeHandlers) handler();
    };
    socket.on("close", closed);
    socket.on("error", () => socket.destroy());
  }

  static connect(host: string, port: number, timeoutMs = 10_000): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port });
      const timer = setTimeout(() => {
        socket.destroy();
        reject(new Error(`connect timeout to ${host}:${port}`));
      }, timeoutMs);
      socket.once("connect", () => {
        clearTimeout(timer);
        resolve(new TcpTransport(socket));
      });
      socket.once("error", (err) => {
        clearTimeout(timer);
        reject(err);
      });
    });
  }

  sendLine(line: string): void {
    this.socket.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.end();
    this.socket.destroy();
  }
}
